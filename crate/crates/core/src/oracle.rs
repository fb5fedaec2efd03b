//! Direct integration of the Schrödinger equation through scaled dipoles.
//!
//! This path uses no closed form. On a single dipole the substitution
//! `ξ = (x - x0)/ε` turns `-y'' + ε^{-2} V((x-x0)/ε) y = k² y` into
//!
//! ```text
//! -w''(ξ) + V(ξ) w(ξ) = (εk)² w(ξ),   ξ ∈ [-1, 1]
//! ```
//!
//! so the potential is O(1) on a fixed interval and the `ε^{-2}` stiffness
//! never appears. The equation is integrated with fixed-step RK4, halving the
//! step until two successive fundamental pairs agree to [`PAIR_TOL`] and the
//! Wronskian defect is below the same bound. Matching `w, w'` to plane waves at
//! `x0 ± ε` then yields the transfer matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::regularized::{ordered_product, DipoleArraySpec, ResonantPotential};
use crate::transfer::{amplitudes_from_matrix, TransferMatrix};

pub const PAIR_TOL: f64 = 1e-10;
const INITIAL_STEPS: usize = 32;
const MAX_HALVINGS: u32 = 20;

/// Values at `ξ = 1` of the solutions started from `(1, 0)` and `(0, 1)` at `ξ = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalPair {
    pub y1: f64,
    pub y1p: f64,
    pub y2: f64,
    pub y2p: f64,
}

impl FundamentalPair {
    pub fn wronskian(&self) -> f64 {
        self.y1 * self.y2p - self.y1p * self.y2
    }

    fn max_diff(&self, other: &Self) -> f64 {
        [
            self.y1 - other.y1,
            self.y1p - other.y1p,
            self.y2 - other.y2,
            self.y2p - other.y2p,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Integrates `w'' = (V(ξ) - e) w` for both initial conditions at once.
fn rk4_pair<F: Fn(f64) -> f64>(v: &F, energy: f64, steps: usize) -> FundamentalPair {
    let h = 2.0 / steps as f64;
    // state: [w1, w1', w2, w2']
    let mut s = [1.0, 0.0, 0.0, 1.0];
    let rhs = |xi: f64, s: &[f64; 4]| -> [f64; 4] {
        let q = v(xi) - energy;
        [s[1], q * s[0], s[3], q * s[2]]
    };
    let axpy = |s: &[f64; 4], k: &[f64; 4], a: f64| -> [f64; 4] {
        [s[0] + a * k[0], s[1] + a * k[1], s[2] + a * k[2], s[3] + a * k[3]]
    };
    for i in 0..steps {
        let xi = -1.0 + i as f64 * h;
        let k1 = rhs(xi, &s);
        let k2 = rhs(xi + 0.5 * h, &axpy(&s, &k1, 0.5 * h));
        let k3 = rhs(xi + 0.5 * h, &axpy(&s, &k2, 0.5 * h));
        let k4 = rhs(xi + h, &axpy(&s, &k3, h));
        for j in 0..4 {
            s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    FundamentalPair {
        y1: s[0],
        y1p: s[1],
        y2: s[2],
        y2p: s[3],
    }
}

/// Fundamental pair across one dipole in the rescaled variable.
pub fn integrate_dipole(potential: &ResonantPotential, k: f64, epsilon: f64) -> Result<FundamentalPair> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let v = |xi: f64| potential.potential(xi);
    let energy = (epsilon * k).powi(2);
    let mut steps = INITIAL_STEPS;
    let mut coarse = rk4_pair(&v, energy, steps);
    let mut defect = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        steps *= 2;
        let fine = rk4_pair(&v, energy, steps);
        let change = fine.max_diff(&coarse);
        let wronskian = (fine.wronskian() - 1.0).abs();
        defect = change.max(wronskian);
        if defect <= PAIR_TOL {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::IntegrationFailure {
        halvings: MAX_HALVINGS,
        defect,
    })
}

/// All four plane-wave matrix entries of one dipole from its fundamental pair.
///
/// Nothing here assumes SU(1,1); for real `V` the result has that structure.
pub fn entries_from_pair(pair: &FundamentalPair, x0: f64, k: f64, epsilon: f64) -> Result<[[Complex64; 2]; 2]> {
    if k == 0.0 {
        return Err(Error::Domain("plane-wave basis degenerate at k = 0".into()));
    }
    let iek = Complex64::new(0.0, epsilon * k);
    let left = x0 - epsilon;
    let right = x0 + epsilon;
    // left coefficients (α1, α2) -> right coefficients (β1, β2)
    let map = |a1: f64, a2: f64| -> (Complex64, Complex64) {
        let a = Complex64::from_polar(a1, k * left);
        let b = Complex64::from_polar(a2, -k * left);
        let w = a + b;
        let dw = iek * (a - b);
        let w_r = w * pair.y1 + dw * pair.y2;
        let dw_r = w * pair.y1p + dw * pair.y2p;
        let beta1 = 0.5 * (w_r + dw_r / iek) * Complex64::from_polar(1.0, -k * right);
        let beta2 = 0.5 * (w_r - dw_r / iek) * Complex64::from_polar(1.0, k * right);
        (beta1, beta2)
    };
    let (m11, m21) = map(1.0, 0.0);
    let (m12, m22) = map(0.0, 1.0);
    Ok([[m11, m12], [m21, m22]])
}

pub fn matrix_from_pair(pair: &FundamentalPair, x0: f64, k: f64, epsilon: f64) -> Result<TransferMatrix> {
    let e = entries_from_pair(pair, x0, k, epsilon)?;
    Ok(TransferMatrix::new(e[0][0], e[1][0]))
}

pub fn dipole_matrix_numeric(potential: &ResonantPotential, x0: f64, k: f64, epsilon: f64) -> Result<TransferMatrix> {
    if k == 0.0 {
        return Err(Error::Domain("plane-wave basis degenerate at k = 0".into()));
    }
    let pair = integrate_dipole(potential, k, epsilon)?;
    matrix_from_pair(&pair, x0, k, epsilon)
}

/// Full numeric matrix `[[m11, m12], [m21, m22]]` of one dipole.
pub fn dipole_entries_numeric(
    potential: &ResonantPotential,
    x0: f64,
    k: f64,
    epsilon: f64,
) -> Result<[[Complex64; 2]; 2]> {
    if k == 0.0 {
        return Err(Error::Domain("plane-wave basis degenerate at k = 0".into()));
    }
    entries_from_pair(&integrate_dipole(potential, k, epsilon)?, x0, k, epsilon)
}

/// Transfer matrix of the whole array by direct integration.
pub fn array_matrix_numeric(spec: &DipoleArraySpec, k: f64) -> Result<TransferMatrix> {
    if k == 0.0 {
        return Err(Error::Domain("plane-wave basis degenerate at k = 0".into()));
    }
    // Every site sees the same rescaled problem; only the matching phases differ.
    let pair = integrate_dipole(&spec.potential, k, spec.epsilon)?;
    ordered_product(spec.sites().map(|x0| matrix_from_pair(&pair, x0, k, spec.epsilon)))
}

pub fn array_transmission_numeric(spec: &DipoleArraySpec, k: f64) -> Result<f64> {
    Ok(amplitudes_from_matrix(&array_matrix_numeric(spec, k)?)?.transmission())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularized::{custom_potential, example_potential};

    fn free() -> ResonantPotential {
        let samples: Vec<(f64, f64)> = (0..64).map(|i| (-1.0 + 2.0 * i as f64 / 63.0, 1.0)).collect();
        custom_potential(&samples).unwrap()
    }

    #[test]
    fn free_pair_is_linear_motion() {
        let pair = integrate_dipole(&free(), 0.0, 0.1).unwrap();
        assert!((pair.y1 - 1.0).abs() < 1e-12 && pair.y1p.abs() < 1e-12);
        assert!((pair.y2 - 2.0).abs() < 1e-12 && (pair.y2p - 1.0).abs() < 1e-12);
        // at energy e = (εk)² the solutions are cos / sin of sqrt(e) (ξ + 1)
        let (k, eps) = (3.0, 0.1);
        let q = eps * k;
        let pair = integrate_dipole(&free(), k, eps).unwrap();
        assert!((pair.y1 - (2.0 * q).cos()).abs() < 1e-10);
        assert!((pair.y2 - (2.0 * q).sin() / q).abs() < 1e-10);
        assert!((pair.wronskian() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_energy_reproduces_half_bound_state() {
        for &theta in &[0.2, 0.5, 2.0] {
            let p = example_potential(theta).unwrap();
            let pair = integrate_dipole(&p, 0.0, 0.1).unwrap();
            assert!((pair.y1 - theta).abs() < 1e-8, "theta={theta} y1={}", pair.y1);
            assert!(pair.y1p.abs() < 1e-8);
            // companion solution v: v(1) = η/θ, v'(1) = 1/θ
            assert!((pair.y2 - p.eta() / theta).abs() < 1e-8);
            assert!((pair.y2p - 1.0 / theta).abs() < 1e-8);
        }
    }

    #[test]
    fn self_convergence() {
        let p = example_potential(0.2).unwrap();
        let pair = integrate_dipole(&p, 1.0, 0.1).unwrap();
        let reference = rk4_pair(&|xi| p.potential(xi), 0.01, 1 << 14);
        assert!(pair.max_diff(&reference) < 1e-9);
        assert!((pair.wronskian() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn free_dipole_is_identity() {
        for &k in &[0.3, 1.0, 4.0] {
            let m = dipole_matrix_numeric(&free(), 0.7, k, 0.2).unwrap();
            assert!(m.max_abs_diff(&TransferMatrix::IDENTITY) < 1e-9);
        }
        assert!(dipole_matrix_numeric(&free(), 0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn numeric_matrix_is_su11() {
        for &theta in &[0.2, 0.5, 2.0] {
            let p = example_potential(theta).unwrap();
            let m = dipole_matrix_numeric(&p, 1.0, 1.7, 0.1).unwrap();
            assert!(m.su11_defect().abs() < 1e-8);
            let e = dipole_entries_numeric(&p, 1.0, 1.7, 0.1).unwrap();
            assert!((e[0][1] - e[1][0].conj()).norm() < 1e-10);
            assert!((e[1][1] - e[0][0].conj()).norm() < 1e-10);
        }
        let sampled = custom_potential(&example_potential(0.5).unwrap().samples(129)).unwrap();
        let m = dipole_matrix_numeric(&sampled, 0.0, 1.0, 0.1).unwrap();
        assert!(m.su11_defect().abs() < 1e-8);
    }

    #[test]
    fn single_dipole_limit() {
        let theta: f64 = 0.2;
        let t1 = 4.0 * theta * theta / (theta * theta + 1.0).powi(2);
        let p = example_potential(theta).unwrap();
        let err = |eps: f64| {
            let spec = DipoleArraySpec::new(p.clone(), 1, eps, 1.0).unwrap();
            (array_transmission_numeric(&spec, 1.0).unwrap() - t1).abs()
        };
        assert!(err(1e-4) < 1e-3);
        assert!(err(1e-4) < err(1e-2));
    }

    #[test]
    fn free_array_is_transparent() {
        let spec = DipoleArraySpec::new(free(), 5, 0.3, 1.0).unwrap();
        for &k in &[0.2, 1.5, 3.0] {
            assert!((array_transmission_numeric(&spec, k).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn small_k_limit_is_finite() {
        let p = example_potential(0.2).unwrap();
        let spec = DipoleArraySpec::new(p, 3, 0.1, 1.0).unwrap();
        let a = array_transmission_numeric(&spec, 1e-3).unwrap();
        let b = array_transmission_numeric(&spec, 1e-4).unwrap();
        assert!(((a - b) / b).abs() < 1e-2);
    }
}
