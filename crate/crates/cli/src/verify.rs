//! Cross-route equivalence and invariant checks behind `dpcomb verify`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::time::Instant;

use dpcomb::oracle::dipole_matrix_numeric;
use dpcomb::{
    amplitudes_closed_form, amplitudes_from_matrix, array_transmission_numeric, comb_matrix_with,
    dipole_matrix_analytic, example_potential, resonances, single_matrix, transmission_closed_form, CombSpec, Contrast,
    DipoleArraySpec, TransferMatrix,
};
use rand::{rngs::StdRng, RngExt, SeedableRng};

use crate::error::{CliError, CliResult};

pub const EQUIVALENCE_TOL: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-12;
pub const ETA_REFERENCE: f64 = 0.21296;
pub const ETA_TOL: f64 = 1e-4;
/// Accepted range for the error ratio when ε is halved at first order.
pub const HALVING_RATIO: (f64, f64) = (1.6, 2.6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {:<28} {:>7.3}s  {}", c.name, c.seconds, c.detail);
        }
        let total = self.checks.len();
        let failed = total - self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{} of {total} checks passed", total - failed);
        out
    }

    pub fn into_result(self) -> CliResult<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(CliError::Verify(self.failures().join(", ")))
        }
    }
}

fn run(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let start = Instant::now();
    let (passed, detail) = f();
    Check {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn product_with<F>(single: &F, n: usize, theta: f64, k: f64) -> dpcomb::Result<TransferMatrix>
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    comb_matrix_with(&CombSpec::unit(n, theta)?, k, single)
}

fn product_transmission<F>(single: &F, n: usize, theta: f64, k: f64) -> dpcomb::Result<f64>
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    Ok(amplitudes_from_matrix(&product_with(single, n, theta, k)?)?.transmission())
}

/// Fold a fallible per-point error into a running maximum; a failed evaluation counts as infinite.
fn worst(acc: f64, value: dpcomb::Result<f64>) -> f64 {
    match value {
        Ok(v) if v.is_finite() => acc.max(v),
        _ => f64::INFINITY,
    }
}

fn closed_form_vs_product<F>(single: &F) -> (bool, String)
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let mut max_err: f64 = 0.0;
    for i in 1..=9 {
        let theta = i as f64 / 10.0;
        for n in 1..=12 {
            for p in 1..=500 {
                let k = PI * p as f64 / 500.0;
                let err = (|| {
                    let closed = amplitudes_closed_form(theta, k, n)?;
                    let product = amplitudes_from_matrix(&product_with(single, n, theta, k)?)?;
                    let dt = (closed.transmission() - product.transmission()).abs();
                    let damp = (closed.t - product.t).norm().max((closed.r - product.r).norm());
                    Ok(dt.max(damp))
                })();
                max_err = worst(max_err, err);
            }
        }
    }
    (
        max_err <= EQUIVALENCE_TOL,
        format!("max |Δt|, |Δr|, |ΔT| = {max_err:.2e}"),
    )
}

fn invariances<F>(single: &F, samples: usize) -> (bool, String)
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut max_err: f64 = 0.0;
    for _ in 0..samples {
        let theta = rng.random_range(0.1..0.9);
        let k = rng.random_range(1e-3..PI - 1e-3);
        let n = rng.random_range(1..=12usize);
        let err = (|| {
            let t = product_transmission(single, n, theta, k)?;
            let variants = [
                product_transmission(single, n, theta, k + PI)?,
                product_transmission(single, n, theta, PI - k)?,
                product_transmission(single, n, -theta, k)?,
                product_transmission(single, n, 1.0 / theta, k)?,
            ];
            Ok(variants.iter().map(|v| (v - t).abs()).fold(0.0, f64::max))
        })();
        max_err = worst(max_err, err);
    }
    (
        max_err <= INVARIANCE_TOL,
        format!("{samples} samples, max deviation {max_err:.2e}"),
    )
}

fn even_identity<F>(single: &F) -> (bool, String)
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let mut max_err: f64 = 0.0;
    for theta in [0.1, 0.5, 0.9] {
        for n in (2..=40).step_by(2) {
            let err = product_with(single, n, theta, FRAC_PI_2).map(|m| m.max_abs_diff(&TransferMatrix::IDENTITY));
            max_err = worst(max_err, err);
        }
    }
    (max_err <= INVARIANCE_TOL, format!("max |M_n(π/2) - I| = {max_err:.2e}"))
}

fn resonance_values<F>(single: &F) -> (bool, String)
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let mut min_t: f64 = 1.0;
    for theta in [0.1, 0.3, 0.5] {
        for n in 2..=10 {
            let set = match resonances(theta, n) {
                Ok(s) => s,
                Err(_) => return (false, format!("no resonance set for θ={theta}, n={n}")),
            };
            for &k in &set.points {
                let t = product_transmission(single, n, theta, k).unwrap_or(f64::NAN);
                min_t = if t.is_nan() { f64::NEG_INFINITY } else { min_t.min(t) };
            }
        }
    }
    (
        min_t >= 1.0 - EQUIVALENCE_TOL,
        format!("min T at resonances = {min_t:.12}"),
    )
}

fn su11_closure<F>(single: &F) -> (bool, String)
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let mut max_err: f64 = 0.0;
    for theta in [0.1, 0.5, 0.9, 1.7] {
        for n in [1, 4, 12, 25] {
            for p in 0..200 {
                let k = PI * p as f64 / 199.0;
                let err = product_with(single, n, theta, k).map(|m| m.su11_defect() / m.z1.norm_sqr());
                max_err = worst(max_err, err);
            }
        }
    }
    (
        max_err <= EQUIVALENCE_TOL,
        format!("max relative det defect = {max_err:.2e}"),
    )
}

fn eta_reproduction() -> (bool, String) {
    match example_potential(0.2) {
        Ok(p) => {
            let eta = p.eta();
            ((eta - ETA_REFERENCE).abs() <= ETA_TOL, format!("η(0.2) = {eta:.10}"))
        }
        Err(e) => (false, e.to_string()),
    }
}

/// The analytic dipole matrix is built from zero-energy solutions, so it must
/// agree with the integrated one to first order: the gap halves with ε.
fn dipole_first_order() -> (bool, String) {
    let mut worst_ratio = (f64::INFINITY, f64::NEG_INFINITY);
    let mut max_defect: f64 = 0.0;
    for theta in [0.2, 0.5, 2.0] {
        let Ok(p) = example_potential(theta) else {
            return (false, format!("example potential failed at θ={theta}"));
        };
        for k in [0.5, 1.0, 2.5] {
            let gaps: Vec<f64> = [0.02, 0.01, 0.005]
                .iter()
                .map(|&eps| {
                    let numeric = dipole_matrix_numeric(&p, 0.0, k, eps);
                    let analytic = dipole_matrix_analytic(theta, p.eta(), 0.0, k, eps);
                    match (numeric, analytic) {
                        (Ok(m), Ok(a)) => {
                            max_defect = max_defect.max(m.su11_defect());
                            a.max_abs_diff(&m)
                        }
                        _ => f64::NAN,
                    }
                })
                .collect();
            for w in gaps.windows(2) {
                let r = w[0] / w[1];
                let r = if r.is_nan() { f64::INFINITY } else { r };
                worst_ratio = (worst_ratio.0.min(r), worst_ratio.1.max(r));
            }
        }
    }
    let ok = worst_ratio.0 >= HALVING_RATIO.0 && worst_ratio.1 <= HALVING_RATIO.1 && max_defect <= 1e-8;
    (
        ok,
        format!(
            "gap ratios in [{:.3}, {:.3}], oracle det defect {max_defect:.1e}",
            worst_ratio.0, worst_ratio.1
        ),
    )
}

/// `max_k |T_{n,ε} - T_n|` from the oracle halves with ε once ε is small.
///
/// The sup over a k-set is used because the first-order error coefficient
/// changes sign in k, where pointwise ratios are meaningless.
fn eps_convergence() -> (bool, String) {
    let Ok(p) = example_potential(0.2) else {
        return (false, "example potential failed".into());
    };
    let ladder = [0.005, 0.0025, 0.00125];
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for n in [2, 3, 4] {
        let sup: Vec<f64> = ladder
            .iter()
            .map(|&eps| {
                (0..20)
                    .map(|i| {
                        let k = (i as f64 + 0.5) * PI / 20.0;
                        let t = transmission_closed_form(0.2, k, n);
                        let spec = DipoleArraySpec::new(p.clone(), n, eps, 1.0);
                        match (t, spec.and_then(|s| array_transmission_numeric(&s, k))) {
                            (Ok(t), Ok(te)) => (te - t).abs(),
                            _ => f64::NAN,
                        }
                    })
                    .fold(
                        0.0,
                        |a: f64, e| if e.is_nan() || a.is_nan() { f64::NAN } else { a.max(e) },
                    )
            })
            .collect();
        for w in sup.windows(2) {
            let r = w[0] / w[1];
            let r = if r.is_nan() { f64::INFINITY } else { r };
            range = (range.0.min(r), range.1.max(r));
        }
    }
    let ok = range.0 >= HALVING_RATIO.0 && range.1 <= HALVING_RATIO.1;
    (ok, format!("sup-error ratios in [{:.3}, {:.3}]", range.0, range.1))
}

/// Runs the suite with a caller-supplied single-site matrix.
pub fn verify_with<F>(level: Level, single: F) -> Report
where
    F: Fn(Contrast, f64) -> TransferMatrix,
{
    let samples = match level {
        Level::Fast => 2_000,
        Level::Full => 10_000,
    };
    let mut checks = vec![
        run("closed-form-vs-product", || closed_form_vs_product(&single)),
        run("invariances", || invariances(&single, samples)),
        run("even-n-identity", || even_identity(&single)),
        run("resonance-values", || resonance_values(&single)),
        run("su11-closure", || su11_closure(&single)),
    ];
    if level == Level::Full {
        checks.push(run("eta-reproduction", eta_reproduction));
        checks.push(run("dipole-first-order", dipole_first_order));
        checks.push(run("eps-convergence", eps_convergence));
    }
    Report { level, checks }
}

pub fn verify(level: Level) -> Report {
    verify_with(level, single_matrix)
}

pub fn cmd_verify(level: Level) -> CliResult<Report> {
    verify(level).into_result()
}
