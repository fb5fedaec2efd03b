//! Closed-form scattering data for the ideal δ'_θ-comb.
//!
//! With `α = ((1+θ²)/2θ) cos k` the amplitudes are
//!
//! ```text
//! 1/t_n = ((1+θ²)/2θ) U_{n-1}(α) e^{i(n-1)k} - U_{n-2}(α) e^{ink}
//! r_n/t_n = ((1-θ²)/2θ) U_{n-1}(α) e^{i(n-1)k}
//! T_n = 1 / (1 + ((1-θ²)²/4θ²) U_{n-1}(α)²)
//! ```
//!
//! Operations that take a general θ reduce it to the canonical
//! representative `min(|θ|, 1/|θ|)` first; `T_n` is invariant under
//! `θ -> -θ` and `θ -> 1/θ`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::chebyshev::{chebyshev_u, chebyshev_u_pair, ChebyshevArg};
use crate::error::{Error, Result};
use crate::transfer::{Amplitudes, Contrast};

/// Multiplicative constant in [`small_theta_bound`].
pub const SMALL_THETA_CONSTANT: f64 = 8.0;

/// Maps θ to `min(|θ|, 1/|θ|)`.
pub fn canonical_theta(theta: f64) -> Result<f64> {
    Ok(Contrast::new(theta)?.canonical().theta())
}

/// `T_n(θ, k)`.
pub fn transmission_closed_form(theta: f64, k: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let theta = canonical_theta(theta)?;
    let alpha = ChebyshevArg::for_comb(theta, k);
    let u = chebyshev_u(n - 1, alpha.value());
    let s = (1.0 - theta * theta) / (2.0 * theta);
    // an overflowed U_{n-1} gives 1/inf = 0, below the smallest positive f64 anyway
    Ok(1.0 / (1.0 + s * s * u * u))
}

/// `(t_n, r_n)` from the Chebyshev representation.
///
/// θ is used as given (not canonicalized): the amplitudes themselves change
/// phase under `θ -> -θ` and `θ -> 1/θ`.
pub fn amplitudes_closed_form(theta: f64, k: f64, n: usize) -> Result<Amplitudes> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let c = Contrast::new(theta)?;
    let alpha = ChebyshevArg::for_comb(theta, k);
    let (u1, u2) = chebyshev_u_pair(n, alpha.value());
    if !(u1.is_finite() && u2.is_finite()) {
        return Err(Error::Overflow(u1.abs()));
    }
    let phase_lo = Complex64::from_polar(1.0, (n - 1) as f64 * k);
    let phase_hi = Complex64::from_polar(1.0, n as f64 * k);
    let inv_t = phase_lo * (c.cosh_part() * u1) - phase_hi * u2;
    let r_over_t = phase_lo * (-c.sinh_part() * u1);
    let t = inv_t.inv();
    Ok(Amplitudes { t, r: r_over_t * t })
}

/// The `n - 1` transmission resonances on `(0, π)`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceSet {
    pub points: Vec<f64>,
    pub n: usize,
    pub theta: f64,
}

impl ResonanceSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Confirms each point is a local maximum of `T_n` at value 1 by
    /// golden-section search over the bracket between its neighbours.
    pub fn verify(&self, tol: f64) -> bool {
        let t = |k: f64| transmission_closed_form(self.theta, k, self.n).unwrap_or(f64::NAN);
        self.points.iter().enumerate().all(|(j, &kj)| {
            let lo = if j == 0 { 0.0 } else { 0.5 * (self.points[j - 1] + kj) };
            let hi = match self.points.get(j + 1) {
                Some(&next) => 0.5 * (kj + next),
                None => PI,
            };
            let (_, best) = golden_section_max(t, lo, hi, 1e-12);
            let at = t(kj);
            at >= 1.0 - tol && best - at <= tol
        })
    }
}

/// Golden-section maximization on `[lo, hi]`, returning `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Roots of `cos k_j = (2θ/(θ²+1)) cos(πj/n)`, `j = 1..n-1`.
///
/// θ is canonicalized first. `n < 2` and `θ = ±1` give an empty set since
/// `T_n` is then constant in `k`.
pub fn resonances(theta: f64, n: usize) -> Result<ResonanceSet> {
    let theta = canonical_theta(theta)?;
    let mut points = Vec::new();
    if n >= 2 && theta < 1.0 {
        let ratio = 2.0 * theta / (theta * theta + 1.0);
        points.resize(n - 1, 0.0);
        for j in 1..n {
            if 2 * j == n {
                points[j - 1] = FRAC_PI_2;
            } else if 2 * j < n {
                points[j - 1] = (ratio * (PI * j as f64 / n as f64).cos()).acos();
            } else {
                points[j - 1] = PI - points[n - j - 1];
            }
        }
    }
    Ok(ResonanceSet { points, n, theta })
}

/// The open interval `I_θ` around `π/2` that holds every resonance for every `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Passband {
    pub lo: f64,
    pub hi: f64,
}

impl Passband {
    pub fn contains(&self, k: f64) -> bool {
        k > self.lo && k < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn require_open_unit(theta: f64, what: &str) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} requires 0 < theta < 1, got {theta}")))
    }
}

pub fn passband(theta: f64) -> Result<Passband> {
    require_open_unit(theta, "passband")?;
    let lo = FRAC_PI_2 - (2.0 * theta / (theta * theta + 1.0)).asin();
    Ok(Passband { lo, hi: PI - lo })
}

/// `ζ_θ(k) = inf_n T_n(θ, k)`: `1 - (θ²-1)² / ((θ²+1)² sin² k)` on `I_θ`, else 0.
///
/// `k` is reduced into `[0, π)` first.
pub fn envelope(theta: f64, k: f64) -> Result<f64> {
    let band = passband(theta)?;
    let k = k.rem_euclid(PI);
    if !band.contains(k) {
        return Ok(0.0);
    }
    let q = (theta * theta - 1.0) / (theta * theta + 1.0);
    let s = k.sin();
    Ok((1.0 - q * q / (s * s)).max(0.0))
}

/// `c θ^{2n} / |cos k|^{2(n-1)}` with `c = 8`.
///
/// This dominates `T_n(θ, k)` whenever θ is at most
/// [`small_theta_threshold`]`(k, n)`; beyond that it is only asymptotic.
pub fn small_theta_bound(theta: f64, k: f64, n: usize) -> Result<f64> {
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(Error::domain(format!(
            "small-theta bound needs 0 < theta <= 0.5, got {theta}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let d = k.cos().abs();
    if d < 1e-8 {
        return Err(Error::domain("bound degenerate at band center"));
    }
    let n = n as i32;
    Ok(SMALL_THETA_CONSTANT * theta.powi(2 * n) / d.powi(2 * (n - 1)))
}

/// Largest θ for which [`small_theta_bound`] is guaranteed: `min(1/4, |cos k| / (4 √n))`.
///
/// For such θ, `α = cosh κ |cos k| >= 2√n`, `U_{n-1}(α) >= (2α - 1/α)^{n-1}`, and
/// the remaining factors stay above `1/2`.
pub fn small_theta_threshold(k: f64, n: usize) -> f64 {
    (k.cos().abs() / (4.0 * (n.max(1) as f64).sqrt())).min(0.25)
}

/// `4 n² (1 - θ)²`, an upper bound on `1 - T_n(θ, k)` for θ near 1.
pub fn theta_to_one_bound(theta: f64, n: usize) -> Result<f64> {
    if !(theta > 0.9 && theta < 1.1) {
        return Err(Error::domain(format!(
            "theta-to-one bound needs 0.9 < theta < 1.1, got {theta}"
        )));
    }
    let n = n as f64;
    Ok(4.0 * n * n * (1.0 - theta) * (1.0 - theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{amplitudes_from_matrix, comb_matrix, CombSpec};

    fn t(theta: f64, k: f64, n: usize) -> f64 {
        transmission_closed_form(theta, k, n).unwrap()
    }

    fn matrix_t(theta: f64, k: f64, n: usize) -> f64 {
        let m = comb_matrix(&CombSpec::unit(n, theta).unwrap(), k).unwrap();
        amplitudes_from_matrix(&m).unwrap().transmission()
    }

    #[test]
    fn single_interaction() {
        for &theta in &[0.1, 0.5, 3.0, -0.4] {
            let expected = 4.0 * theta * theta / (theta * theta + 1.0_f64).powi(2);
            for &k in &[0.0, 0.3, 2.0] {
                assert!((t(theta, k, 1) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unit_contrast_transparent() {
        for n in 1..10 {
            assert_eq!(t(1.0, 0.77, n), 1.0);
        }
    }

    #[test]
    fn two_sites_band_center() {
        assert!((t(0.5, FRAC_PI_2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_theta_rejected() {
        assert!(transmission_closed_form(0.0, 1.0, 3).is_err());
        assert!(amplitudes_closed_form(0.0, 1.0, 3).is_err());
        assert!(transmission_closed_form(0.5, 1.0, 0).is_err());
    }

    #[test]
    fn matches_matrix_route() {
        // T_5(0.3, 1.0) from the transfer-matrix product.
        assert!((t(0.3, 1.0, 5) - matrix_t(0.3, 1.0, 5)).abs() < 1e-12);
    }

    #[test]
    fn amplitudes_low_n() {
        for &theta in &[0.2f64, 0.7, 1.8] {
            let kappa = theta.ln();
            let (ch, sh) = (kappa.cosh(), kappa.sinh());
            for &k in &[0.1, 0.9, 2.2] {
                let e2 = Complex64::from_polar(1.0, 2.0 * k);
                let a2 = amplitudes_closed_form(theta, k, 2).unwrap();
                assert!((a2.t.inv() - (e2 * sh * sh + ch * ch)).norm() < 1e-12);
                assert!((a2.r / a2.t - (-(e2 + 1.0) * sh * ch)).norm() < 1e-12);
                let a3 = amplitudes_closed_form(theta, k, 3).unwrap();
                let inv_t3 = (e2 + 1.0).powi(2) * sh * sh * ch + ch;
                let r_t3 = -(e2 + 1.0).powi(2) * ch * ch * sh + e2 * sh;
                assert!((a3.t.inv() - inv_t3).norm() < 1e-12);
                assert!((a3.r / a3.t - r_t3).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn four_site_reflection_zeros() {
        let theta: f64 = 0.35;
        let kappa = theta.ln();
        for &k in &[0.4, 1.1, 2.9] {
            let a = amplitudes_closed_form(theta, k, 4).unwrap();
            let e2 = Complex64::from_polar(1.0, 2.0 * k);
            let expected = e2
                * 2.0
                * kappa.sinh()
                * kappa.cosh()
                * (e2 + 1.0)
                * (1.0 - 2.0 * kappa.cosh().powi(2) * k.cos().powi(2));
            assert!((a.r / a.t - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn amplitudes_match_matrix_product() {
        let a = amplitudes_closed_form(0.7, 0.4, 6).unwrap();
        let m = comb_matrix(&CombSpec::unit(6, 0.7).unwrap(), 0.4).unwrap();
        let b = amplitudes_from_matrix(&m).unwrap();
        assert!((a.t - b.t).norm() < 1e-10);
        assert!((a.r - b.r).norm() < 1e-10);
        assert!(a.unitarity_defect().abs() < 1e-12);
    }

    #[test]
    fn resonances_three_and_four() {
        for &theta in &[0.05, 0.2, 0.6] {
            let r3 = resonances(theta, 3).unwrap();
            let k1 = (theta / (1.0 + theta * theta)).acos();
            assert!((r3.points[0] - k1).abs() < 1e-14);
            assert!((r3.points[1] - (PI - k1)).abs() < 1e-14);
            let r4 = resonances(theta, 4).unwrap();
            assert_eq!(r4.points[1], FRAC_PI_2);
            let k1 = (2f64.sqrt() * theta / (1.0 + theta * theta)).acos();
            assert!((r4.points[0] - k1).abs() < 1e-14);
        }
    }

    #[test]
    fn resonance_expansion_small_theta() {
        let theta = 0.1;
        let k1 = resonances(theta, 3).unwrap().points[0];
        let approx = FRAC_PI_2 - theta + 5.0 / 6.0 * theta.powi(3);
        assert!((k1 - approx).abs() < 10.0 * theta.powi(5));
    }

    #[test]
    fn resonance_set_structure() {
        for n in 2..=30 {
            let set = resonances(0.27, n).unwrap();
            assert_eq!(set.len(), n - 1);
            for j in 0..set.len() {
                assert!((set.points[n - 2 - j] - (PI - set.points[j])).abs() < 1e-12);
                assert!(t(0.27, set.points[j], n) >= 1.0 - 1e-10);
            }
            assert!(set.points.windows(2).all(|w| w[0] < w[1]));
            assert!(set.verify(1e-9), "n={n}");
        }
        assert!(resonances(0.4, 1).unwrap().is_empty());
        assert!(resonances(1.0, 5).unwrap().is_empty());
        // θ = 2.5 canonicalizes to 0.4
        assert_eq!(resonances(2.5, 4).unwrap().points, resonances(0.4, 4).unwrap().points);
    }

    #[test]
    fn passband_contains_all_resonances() {
        let band = passband(0.3).unwrap();
        assert!((band.lo - (FRAC_PI_2 - (0.6f64 / 1.09).asin())).abs() < 1e-15);
        for n in 2..=50 {
            assert!(resonances(0.3, n).unwrap().points.iter().all(|&k| band.contains(k)));
        }
        assert_eq!(
            passband(0.2).map(|b| {
                resonances(0.2, 10)
                    .unwrap()
                    .points
                    .iter()
                    .filter(|&&k| b.contains(k))
                    .count()
            }),
            Ok(9)
        );
        let near_one = passband(1.0 - 1e-9).unwrap();
        assert!(near_one.lo < 1e-4 && near_one.hi > PI - 1e-4);
        assert!(passband(0.0).is_err());
        assert!(passband(1.0).is_err());
    }

    #[test]
    fn envelope_values() {
        let theta: f64 = 0.3;
        let e = envelope(theta, FRAC_PI_2).unwrap();
        let t1 = 4.0 * theta * theta / (theta * theta + 1.0).powi(2);
        assert!((e - t1).abs() < 1e-15);
        let band = passband(theta).unwrap();
        assert_eq!(envelope(theta, band.lo * 0.5).unwrap(), 0.0);
        assert_eq!(envelope(theta, band.lo).unwrap(), 0.0);
        let min_t = (1..=200).map(|n| t(theta, 1.4, n)).fold(f64::INFINITY, f64::min);
        let z = envelope(theta, 1.4).unwrap();
        assert!(z <= min_t + 1e-12);
        // φ/π is close to 2/5 here, so n <= 200 does not get near the infimum
        assert!(min_t - z < 0.1);
        let min_t = (1..=200).map(|n| t(theta, 1.3, n)).fold(f64::INFINITY, f64::min);
        let z = envelope(theta, 1.3).unwrap();
        assert!(z <= min_t + 1e-12 && min_t - z < 1e-3);
    }

    #[test]
    fn small_theta_bound_holds() {
        let k = PI / 4.0;
        assert!(small_theta_bound(0.1, k, 5).unwrap() >= t(0.1, k, 5));
        // guaranteed regime over a grid of (k, n)
        for n in 1..=20 {
            for i in 1..200 {
                let k = PI * i as f64 / 200.0;
                if (k.cos()).abs() < 1e-3 {
                    continue;
                }
                let th = small_theta_threshold(k, n);
                for &f in &[1.0, 0.5, 0.1] {
                    let theta = th * f;
                    assert!(
                        t(theta, k, n) <= small_theta_bound(theta, k, n).unwrap(),
                        "n={n} k={k} theta={theta}"
                    );
                }
            }
        }
        assert!(small_theta_bound(0.2, FRAC_PI_2, 3).is_err());
        assert!(small_theta_bound(0.9, 0.3, 3).is_err());
    }

    #[test]
    fn theta_to_one() {
        assert_eq!(theta_to_one_bound(1.0, 7).unwrap(), 0.0);
        assert!((theta_to_one_bound(0.99, 5).unwrap() - 0.01).abs() < 1e-14);
        assert!((theta_to_one_bound(0.95, 3).unwrap() - 0.09).abs() < 1e-14);
        for &(theta, n) in &[(0.99, 5usize), (0.95, 3)] {
            let bound = theta_to_one_bound(theta, n).unwrap();
            let worst = (0..10_000)
                .map(|i| 1.0 - t(theta, PI * (i as f64 + 0.5) / 10_000.0, n))
                .fold(0.0, f64::max);
            assert!(worst <= bound);
        }
        assert!(theta_to_one_bound(0.5, 3).is_err());
    }

    #[test]
    fn explicit_t2_t3() {
        for &theta in &[0.1f64, 0.45, 0.8] {
            for i in 0..1000 {
                let k = PI * i as f64 / 1000.0;
                let c2 = k.cos().powi(2);
                let t2 = 4.0 * theta.powi(4) / ((1.0 - theta.powi(4)).powi(2) * c2 + 4.0 * theta.powi(4));
                assert!((t(theta, k, 2) - t2).abs() < 1e-12);
                let t3 = 4.0 * theta.powi(6)
                    / ((1.0 + theta * theta).powi(2)
                        * ((1.0 - theta.powi(4)).powi(2) * c2 * c2
                            - 2.0 * theta * theta * (1.0 - theta * theta).powi(2) * c2
                            + theta.powi(4)));
                assert!((t(theta, k, 3) - t3).abs() < 1e-12);
            }
        }
    }
}
