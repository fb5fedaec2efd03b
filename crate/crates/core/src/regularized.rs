//! Compactly supported resonant potentials and regularized dipole arrays.
//!
//! A resonant potential is built from its half-bound state `u` on `[-1, 1]`
//! as `V = u'' / u`, normalized so that `u(-1) = 1` and `u'(±1) = 0`. The
//! contrast is `θ = u(1)` and `η = θ² ∫ u^{-2}` over `[-1, 1]`. Scaled copies
//! `ε^{-2} V((x - x0)/ε)` placed at `x0 = 0, h, ..., (n-1)h` approximate the
//! δ'_θ-comb as `ε -> 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::spline::CubicSpline;
use crate::transfer::{amplitudes_from_matrix, Contrast, TransferMatrix, OVERFLOW_GUARD};

/// Absolute tolerance for the η quadrature.
pub const ETA_TOL: f64 = 1e-10;
/// Minimum number of samples accepted by [`custom_potential`].
pub const MIN_SAMPLES: usize = 64;
/// Tolerance on `|u'(±1)|` for sampled half-bound states.
pub const SLOPE_TOL: f64 = 1e-6;
/// Header line of the sample exchange format.
pub const SAMPLE_HEADER: &str = "# half-bound-state v1";

const POSITIVITY_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// `u(x) = (x+1)²(4x² - (θ+7)x + 2(θ+1))/4 + 1`
    Quartic,
    Sampled(CubicSpline),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantPotential {
    shape: Shape,
    theta: f64,
    eta: f64,
}

impl ResonantPotential {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// True if `V` is given by a closed form rather than a spline.
    pub fn is_closed_form(&self) -> bool {
        matches!(self.shape, Shape::Quartic)
    }

    /// Half-bound state, extended by its constant limits outside `[-1, 1]`.
    pub fn u(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 1.0;
        }
        if x >= 1.0 {
            return self.theta;
        }
        match &self.shape {
            Shape::Quartic => quartic_u(self.theta, x),
            Shape::Sampled(s) => s.eval(x),
        }
    }

    pub fn u_prime(&self, x: f64) -> f64 {
        if !(-1.0..=1.0).contains(&x) {
            return 0.0;
        }
        match &self.shape {
            Shape::Quartic => (x - 1.0) * (x + 1.0) * (16.0 * x + 3.0 - 3.0 * self.theta) / 4.0,
            Shape::Sampled(s) => s.eval_all(x).1,
        }
    }

    /// `V(x) = u''(x) / u(x)` on `[-1, 1]`, zero outside.
    pub fn potential(&self, x: f64) -> f64 {
        if !(-1.0..=1.0).contains(&x) {
            return 0.0;
        }
        match &self.shape {
            Shape::Quartic => {
                let t = self.theta;
                let num = 48.0 * x * x + 6.0 * (1.0 - t) * x - 16.0;
                let den = (x + 1.0).powi(2) * (4.0 * x * x - (t + 7.0) * x + 2.0 * (t + 1.0)) + 4.0;
                num / den
            }
            Shape::Sampled(s) => {
                let (u, _, d2u) = s.eval_all(x);
                d2u / u
            }
        }
    }

    /// `∫_{-1}^{x} u^{-2}`, clamped to `[-1, 1]`.
    pub fn inverse_square_integral(&self, x: f64) -> f64 {
        let x = x.clamp(-1.0, 1.0);
        if x == -1.0 {
            return 0.0;
        }
        adaptive_simpson(|s| self.u(s).powi(-2), -1.0, x, ETA_TOL)
    }

    /// Second solution `v = u ∫_{-1}^{x} u^{-2}` of `-y'' + V y = 0`,
    /// with `u v' - u' v = 1`. Returns `(v, v')`.
    pub fn companion(&self, x: f64) -> (f64, f64) {
        let x = x.clamp(-1.0, 1.0);
        let integral = self.inverse_square_integral(x);
        let u = self.u(x);
        (u * integral, self.u_prime(x) * integral + 1.0 / u)
    }

    /// `count` equally spaced samples of `u` over `[-1, 1]`.
    pub fn samples(&self, count: usize) -> Vec<(f64, f64)> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let x = if i + 1 == count {
                    1.0
                } else {
                    -1.0 + 2.0 * i as f64 / (count - 1) as f64
                };
                (x, self.u(x))
            })
            .collect()
    }
}

fn quartic_u(theta: f64, x: f64) -> f64 {
    0.25 * (x + 1.0).powi(2) * (4.0 * x * x - (theta + 7.0) * x + 2.0 * (theta + 1.0)) + 1.0
}

fn check_positive<F: Fn(f64) -> f64>(u: F) -> Result<()> {
    for i in 0..POSITIVITY_SAMPLES {
        let x = -1.0 + 2.0 * i as f64 / (POSITIVITY_SAMPLES - 1) as f64;
        let value = u(x);
        if !(value > 0.0) {
            return Err(Error::NotPositive { x, value });
        }
    }
    Ok(())
}

fn eta_of<F: Fn(f64) -> f64>(theta: f64, u: F) -> f64 {
    theta * theta * adaptive_simpson(|x| u(x).powi(-2), -1.0, 1.0, ETA_TOL)
}

/// The explicit quartic family with `u(-1) = 1`, `u(1) = θ`, `u'(±1) = 0`.
pub fn example_potential(theta: f64) -> Result<ResonantPotential> {
    Contrast::new(theta)?;
    check_positive(|x| quartic_u(theta, x))?;
    let eta = eta_of(theta, |x| quartic_u(theta, x));
    Ok(ResonantPotential {
        shape: Shape::Quartic,
        theta,
        eta,
    })
}

/// Derivative at `xs[0]` of the quartic through the five points given.
fn lagrange_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let x0 = xs[0];
    let mut slope = 0.0;
    for j in 0..xs.len() {
        // d/dx of the j-th basis polynomial, evaluated at x0
        let mut sum = 0.0;
        for m in 0..xs.len() {
            if m == j {
                continue;
            }
            let mut term = 1.0 / (xs[j] - xs[m]);
            for l in 0..xs.len() {
                if l != j && l != m {
                    term *= (x0 - xs[l]) / (xs[j] - xs[l]);
                }
            }
            sum += term;
        }
        slope += ys[j] * sum;
    }
    slope
}

/// Builds a resonant potential from samples `(x, u(x))` covering `[-1, 1]`.
///
/// Samples are rescaled so that `u(-1) = 1`. End slopes are estimated from
/// the quartic through the five outermost samples on each side and must be
/// below [`SLOPE_TOL`]. `V` comes from a clamped cubic spline with zero end
/// slopes, so it is accurate to `O(h²)` in the sample spacing.
pub fn custom_potential(samples: &[(f64, f64)]) -> Result<ResonantPotential> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|(x, u)| !x.is_finite() || !u.is_finite()) {
        return Err(Error::domain("samples must be finite"));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::domain("sample abscissae must be strictly increasing"));
    }
    let first = samples[0].0;
    let last = samples[samples.len() - 1].0;
    if (first + 1.0).abs() > 1e-9 || (last - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "samples must span [-1, 1], got [{first}, {last}]"
        )));
    }
    if let Some(&(x, value)) = samples.iter().find(|(_, u)| !(*u > 0.0)) {
        return Err(Error::NotPositive { x, value });
    }

    let scale = samples[0].1;
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs[0] = -1.0;
    *xs.last_mut().unwrap() = 1.0;
    let ys: Vec<f64> = samples.iter().map(|s| s.1 / scale).collect();

    let left = lagrange_slope(&xs[..5], &ys[..5]);
    let n = xs.len();
    let tail_x: Vec<f64> = xs[n - 5..].iter().rev().copied().collect();
    let tail_y: Vec<f64> = ys[n - 5..].iter().rev().copied().collect();
    let right = lagrange_slope(&tail_x, &tail_y);
    if left.abs() > SLOPE_TOL || right.abs() > SLOPE_TOL {
        return Err(Error::NotHalfBound(format!(
            "end slopes u'(-1) = {left:e}, u'(1) = {right:e} exceed {SLOPE_TOL:e}"
        )));
    }

    let theta = ys[n - 1];
    let spline = CubicSpline::clamped(xs, ys, 0.0, 0.0);
    check_positive(|x| spline.eval(x))?;
    let eta = eta_of(theta, |x| spline.eval(x));
    Ok(ResonantPotential {
        shape: Shape::Sampled(spline),
        theta,
        eta,
    })
}

/// Parses the two-column `x u(x)` exchange format.
pub fn parse_samples(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == SAMPLE_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header {SAMPLE_HEADER:?}"),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            let tok = cols.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("missing {what}"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad {what} {tok:?}"),
            })
        };
        let x = next("x")?;
        let u = next("u")?;
        if cols.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "expected two columns".into(),
            });
        }
        out.push((x, u));
    }
    Ok(out)
}

pub fn format_samples(samples: &[(f64, f64)]) -> String {
    let mut s = String::from(SAMPLE_HEADER);
    s.push('\n');
    for (x, u) in samples {
        s.push_str(&format!("{x:.16e} {u:.16e}\n"));
    }
    s
}

/// Closed-form transfer matrix of one scaled dipole `ε^{-2} V((x - x0)/ε)`:
///
/// ```text
/// (1/2θ) [[(θ²+1+iεkη) e^{-2iεk}, (θ²-1-iεkη) e^{-2ikx0}],
///         [(θ²-1+iεkη) e^{2ikx0},  (θ²+1-iεkη) e^{2iεk}]]
/// ```
///
/// It assembles the zero-energy solutions `u`, `v` across the support, so
/// it agrees with the true matrix to first order in `εk`.
pub fn dipole_matrix_analytic(theta: f64, eta: f64, x0: f64, k: f64, epsilon: f64) -> Result<TransferMatrix> {
    Contrast::new(theta)?;
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let two_theta = 2.0 * theta;
    let ek = epsilon * k * eta;
    let z1 = Complex64::new(theta * theta + 1.0, ek) * Complex64::from_polar(1.0, -2.0 * epsilon * k) / two_theta;
    let z2 = Complex64::new(theta * theta - 1.0, ek) * Complex64::from_polar(1.0, 2.0 * k * x0) / two_theta;
    Ok(TransferMatrix::new(z1, z2))
}

/// `n` scaled copies of a resonant potential at `0, h, ..., (n-1)h`.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleArraySpec {
    pub potential: ResonantPotential,
    pub n: usize,
    pub epsilon: f64,
    pub spacing: f64,
}

impl DipoleArraySpec {
    pub fn new(potential: ResonantPotential, n: usize, epsilon: f64, spacing: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("array needs at least one dipole"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::domain(format!("spacing must be positive, got {spacing}")));
        }
        if !(epsilon > 0.0) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(epsilon < 0.5 * spacing) {
            return Err(Error::domain(format!(
                "dipole supports overlap: epsilon {epsilon} must be below spacing/2 = {}",
                0.5 * spacing
            )));
        }
        Ok(Self {
            potential,
            n,
            epsilon,
            spacing,
        })
    }

    /// Site centres `j h`.
    pub fn sites(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| j as f64 * self.spacing)
    }
}

/// Product of per-site matrices, rightmost site applied last.
pub(crate) fn ordered_product<I>(factors: I) -> Result<TransferMatrix>
where
    I: IntoIterator<Item = Result<TransferMatrix>>,
{
    let mut acc = TransferMatrix::IDENTITY;
    for m in factors {
        acc = m? * acc;
        let size = acc.z1.norm();
        if !(size <= OVERFLOW_GUARD) {
            return Err(Error::Overflow(size));
        }
    }
    Ok(acc)
}

/// `M_ε(x_{n-1}) ··· M_ε(x_0)` from [`dipole_matrix_analytic`].
pub fn regularized_comb_matrix(spec: &DipoleArraySpec, k: f64) -> Result<TransferMatrix> {
    let (theta, eta) = (spec.potential.theta(), spec.potential.eta());
    ordered_product(
        spec.sites()
            .map(|x0| dipole_matrix_analytic(theta, eta, x0, k, spec.epsilon)),
    )
}

pub fn regularized_transmission(spec: &DipoleArraySpec, k: f64) -> Result<f64> {
    Ok(amplitudes_from_matrix(&regularized_comb_matrix(spec, k)?)?.transmission())
}
