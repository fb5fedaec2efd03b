//! SU(1,1) transfer matrices for δ'_θ point interactions.
//!
//! A transfer matrix maps the plane-wave coefficients `(a, b)` of
//! `a e^{ikx} + b e^{-ikx}` on the left of an interaction onto those on the
//! right. Every matrix here has the form `[[z1, conj(z2)], [z2, conj(z1)]]`
//! with `|z1|^2 - |z2|^2 = 1`, so only `(z1, z2)` is stored.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Products whose `|z1|` exceeds this are reported as overflow.
pub const OVERFLOW_GUARD: f64 = 1e150;

/// Interface parameter θ of a δ'_θ interaction: `ψ(a+) = θ ψ(a-)`, `ψ'(a+) = ψ'(a-) / θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contrast(f64);

impl Contrast {
    pub fn new(theta: f64) -> Result<Self> {
        if theta == 0.0 || !theta.is_finite() {
            return Err(Error::DegenerateContrast(theta));
        }
        Ok(Self(theta))
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    /// `κ = ln |θ|`.
    pub fn kappa(self) -> f64 {
        self.0.abs().ln()
    }

    /// `(θ² + 1) / 2θ`, i.e. `cosh κ` up to the sign of θ.
    pub fn cosh_part(self) -> f64 {
        (self.0 * self.0 + 1.0) / (2.0 * self.0)
    }

    /// `(θ² - 1) / 2θ`, i.e. `sinh κ` up to the sign of θ.
    pub fn sinh_part(self) -> f64 {
        (self.0 * self.0 - 1.0) / (2.0 * self.0)
    }

    pub fn inverse(self) -> Self {
        Self(1.0 / self.0)
    }

    /// Representative in `(0, 1]` with the same transmission probability.
    pub fn canonical(self) -> Self {
        let t = self.0.abs();
        Self(if t > 1.0 { 1.0 / t } else { t })
    }
}

impl TryFrom<f64> for Contrast {
    type Error = Error;

    fn try_from(theta: f64) -> Result<Self> {
        Self::new(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl TransferMatrix {
    pub const IDENTITY: Self = Self {
        z1: Complex64::new(1.0, 0.0),
        z2: Complex64::new(0.0, 0.0),
    };

    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Full matrix in row-major order.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [[self.z1, self.z2.conj()], [self.z2, self.z1.conj()]]
    }

    /// `|z1|^2 - |z2|^2 - 1`.
    pub fn su11_defect(&self) -> f64 {
        self.z1.norm_sqr() - self.z2.norm_sqr() - 1.0
    }

    pub fn conj(&self) -> Self {
        Self::new(self.z1.conj(), self.z2.conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.z1 * s, self.z2 * s)
    }

    /// Exact group inverse `[[conj z1, -conj z2], [-z2, z1]]`.
    pub fn inverse(&self) -> Self {
        Self::new(self.z1.conj(), -self.z2)
    }

    /// `D M D` with `D = diag(1, -1)`.
    pub fn diag_conjugate(&self) -> Self {
        Self::new(self.z1, -self.z2)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.z1 - other.z1).norm().max((self.z2 - other.z2).norm())
    }
}

impl Mul for TransferMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.z1 * rhs.z1 + self.z2.conj() * rhs.z2,
            self.z2 * rhs.z1 + self.z1.conj() * rhs.z2,
        )
    }
}

/// Left scattering amplitudes of a single-channel problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub t: Complex64,
    pub r: Complex64,
}

impl Amplitudes {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `|t|^2 + |r|^2 - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.transmission() + self.reflection() - 1.0
    }
}

/// A comb of `n` equal δ'_θ interactions at `0, h, ..., (n-1) h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombSpec {
    pub n: usize,
    pub theta: Contrast,
    pub h: f64,
}

impl CombSpec {
    pub fn new(n: usize, theta: f64, h: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("comb needs at least one interaction"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain(format!("spacing must be positive, got {h}")));
        }
        Ok(Self {
            n,
            theta: Contrast::new(theta)?,
            h,
        })
    }

    /// Unit-spacing comb.
    pub fn unit(n: usize, theta: f64) -> Result<Self> {
        Self::new(n, theta, 1.0)
    }
}

/// Transfer matrix across one interaction at phase `z = a k`:
/// `(1/2θ) [[θ²+1, (θ²-1) e^{-2iz}], [(θ²-1) e^{2iz}, θ²+1]]`.
pub fn single_matrix(theta: Contrast, z: f64) -> TransferMatrix {
    let c = theta.cosh_part();
    let s = theta.sinh_part();
    TransferMatrix::new(Complex64::new(c, 0.0), Complex64::from_polar(s, 2.0 * z))
}

/// Ordered product over the comb with a caller-supplied single-site matrix.
///
/// Spacing is folded into the wave number, `k_eff = h k`, and sites sit at
/// the integers. The product is accumulated as `M(j k_eff) · (...)` for
/// `j = 0, 1, ..., n-1`.
pub fn comb_matrix_with<F>(spec: &CombSpec, k: f64, single: F) -> Result<TransferMatrix>
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let k_eff = spec.h * k;
    let mut acc = single(spec.theta, 0.0);
    for j in 1..spec.n {
        acc = single(spec.theta, j as f64 * k_eff) * acc;
        let size = acc.z1.norm();
        if !(size <= OVERFLOW_GUARD) {
            return Err(Error::Overflow(size));
        }
    }
    Ok(acc)
}

/// `M_n = M((n-1) k_eff) ··· M(k_eff) M(0)`.
pub fn comb_matrix(spec: &CombSpec, k: f64) -> Result<TransferMatrix> {
    comb_matrix_with(spec, k, single_matrix)
}

/// Reads `(t, r)` off `[[1/conj t, -conj r/conj t], [-r/t, 1/t]]`.
pub fn amplitudes_from_matrix(m: &TransferMatrix) -> Result<Amplitudes> {
    let lower_right = m.z1.conj();
    if !(lower_right.norm() >= 1.0 - 1e-8) {
        return Err(Error::NumericalCorruption(format!(
            "lower-right entry has modulus {} < 1",
            lower_right.norm()
        )));
    }
    let t = lower_right.inv();
    let r = -t * m.z2;
    Ok(Amplitudes { t, r })
}

pub fn inverse(m: &TransferMatrix) -> TransferMatrix {
    m.inverse()
}
