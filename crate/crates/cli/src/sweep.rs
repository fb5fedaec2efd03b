//! Parameter sweeps over a k-grid.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use dpcomb::regularized::parse_samples;
use dpcomb::{
    amplitudes_from_matrix, array_transmission_numeric, comb_matrix, custom_potential, dipole_matrix_analytic,
    example_potential, regularized_transmission, resonances, transmission_closed_form, CombSpec, DipoleArraySpec,
    ResonantPotential,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::table::{clamp_unit, Row, SpectrumTable};

pub const DEFAULT_POINTS: usize = 2001;
pub const REFINE_POINTS: usize = 50;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Closed form for the ideal comb
    Ideal,
    /// Exact-in-θ,η dipole matrices for an ε-scaled potential array
    Regularized,
    /// Direct ODE integration through the ε-scaled potential array
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ideal => "ideal",
            Mode::Regularized => "regularized",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta: f64,
    pub n: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    pub mode: Mode,
    pub epsilon: Option<f64>,
    pub h: f64,
    pub output_path: Option<PathBuf>,
    /// Sampled half-bound state replacing the quartic example in non-ideal modes.
    pub potential: Option<PathBuf>,
    pub refine: bool,
    /// Adds a `T_alt` column computed by an independent route.
    pub check: bool,
    pub threads: Option<usize>,
    pub stamp: bool,
}

impl SweepConfig {
    pub fn new(theta: f64, n: usize, mode: Mode) -> Self {
        Self {
            theta,
            n,
            k_min: 0.0,
            k_max: PI,
            k_points: DEFAULT_POINTS,
            mode,
            epsilon: None,
            h: 1.0,
            output_path: None,
            potential: None,
            refine: false,
            check: false,
            threads: None,
            stamp: false,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.k_points < 2 {
            return usage(format!("--points must be at least 2, got {}", self.k_points));
        }
        if !(self.k_min.is_finite() && self.k_max.is_finite() && self.k_min < self.k_max) {
            return usage(format!("need k-min < k-max, got {} and {}", self.k_min, self.k_max));
        }
        if self.n == 0 {
            return usage("--n must be at least 1".into());
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return usage(format!("--spacing must be positive, got {}", self.h));
        }
        match (self.mode, self.epsilon) {
            (Mode::Ideal, Some(_)) => usage("--epsilon only applies to regularized and oracle modes".into()),
            (Mode::Regularized | Mode::Oracle, None) => {
                usage(format!("--epsilon is required in {} mode", self.mode.name()))
            }
            (Mode::Ideal, None) if self.potential.is_some() => {
                usage("--potential only applies to regularized and oracle modes".into())
            }
            _ => Ok(()),
        }
    }
}

/// Evenly spaced grid with both end points included.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect()
}

/// Adds [`REFINE_POINTS`] points around every ideal-comb resonance in `[lo, hi]`,
/// spread over one grid step on each side and including the resonance itself.
pub fn refine_grid(grid: &mut Vec<f64>, theta: f64, n: usize, h: f64) -> CliResult<()> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let step = (hi - lo) / (grid.len() - 1) as f64;
    let set = resonances(theta, n)?;
    let half = (REFINE_POINTS / 2) as i64;
    let periods = ((lo * h / PI).floor() as i64 - 1)..=((hi * h / PI).ceil() as i64);
    for m in periods {
        // the set is symmetric under k -> π - k, so shifts by π cover every resonance
        for &kj in &set.points {
            let centre = (kj + m as f64 * PI) / h;
            if centre < lo || centre > hi {
                continue;
            }
            for i in (1 - half)..=half {
                let k = centre + step * i as f64 / half as f64;
                if (lo..=hi).contains(&k) {
                    grid.push(k);
                }
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(())
}

/// Everything needed to evaluate `T` at one k.
#[derive(Debug, Clone)]
pub enum Evaluator {
    Ideal { spec: CombSpec, theta: f64 },
    Regularized(DipoleArraySpec),
    Oracle(DipoleArraySpec),
}

fn load_potential(config: &SweepConfig) -> CliResult<ResonantPotential> {
    let Some(path) = &config.potential else {
        return Ok(example_potential(config.theta)?);
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let potential = custom_potential(&parse_samples(&text)?)?;
    if (potential.theta() - config.theta).abs() > 1e-6 * config.theta.abs().max(1.0) {
        return Err(CliError::Usage(format!(
            "--theta {} disagrees with theta = {} of {}",
            config.theta,
            potential.theta(),
            path.display()
        )));
    }
    Ok(potential)
}

impl Evaluator {
    pub fn from_config(config: &SweepConfig) -> CliResult<Self> {
        config.validate()?;
        Ok(match config.mode {
            Mode::Ideal => Evaluator::Ideal {
                spec: CombSpec::new(config.n, config.theta, config.h)?,
                theta: config.theta,
            },
            mode => {
                let eps = config.epsilon.expect("validated");
                let spec = DipoleArraySpec::new(load_potential(config)?, config.n, eps, config.h)?;
                if mode == Mode::Regularized {
                    Evaluator::Regularized(spec)
                } else {
                    Evaluator::Oracle(spec)
                }
            }
        })
    }

    pub fn transmission(&self, k: f64) -> CliResult<f64> {
        Ok(match self {
            Evaluator::Ideal { spec, theta } => transmission_closed_form(*theta, spec.h * k, spec.n)?,
            Evaluator::Regularized(spec) => regularized_transmission(spec, k)?,
            Evaluator::Oracle(spec) => oracle_transmission(spec, k)?,
        })
    }

    /// The same quantity from an independent route: matrix product for the
    /// ideal comb, oracle for the dipole matrices and vice versa.
    pub fn alternative(&self, k: f64) -> CliResult<f64> {
        Ok(match self {
            Evaluator::Ideal { spec, .. } => amplitudes_from_matrix(&comb_matrix(spec, k)?)?.transmission(),
            Evaluator::Regularized(spec) => oracle_transmission(spec, k)?,
            Evaluator::Oracle(spec) => regularized_transmission(spec, k)?,
        })
    }

    pub fn alternative_name(&self) -> &'static str {
        match self {
            Evaluator::Ideal { .. } => "matrix-product",
            Evaluator::Regularized(_) => "oracle",
            Evaluator::Oracle(_) => "regularized",
        }
    }
}

/// Oracle transmission; at `k = 0` the zero-energy solutions are exact, so the
/// dipole matrices reduce to the analytic ones.
fn oracle_transmission(spec: &DipoleArraySpec, k: f64) -> dpcomb::Result<f64> {
    if k != 0.0 {
        return array_transmission_numeric(spec, k);
    }
    let (theta, eta) = (spec.potential.theta(), spec.potential.eta());
    let m = dipole_matrix_analytic(theta, eta, 0.0, 0.0, spec.epsilon)?;
    let mut acc = m;
    for _ in 1..spec.n {
        acc = m * acc;
    }
    Ok(amplitudes_from_matrix(&acc)?.transmission())
}

pub fn thread_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

/// Evaluates `f` over `ks` in parallel; rows come back in grid order.
pub fn evaluate_rows<F, G>(ks: &[f64], threads: Option<usize>, f: F, alt: Option<G>) -> CliResult<(Vec<Row>, usize)>
where
    F: Fn(f64) -> CliResult<f64> + Sync,
    G: Fn(f64) -> CliResult<f64> + Sync,
{
    let pool = thread_pool(threads)?;
    let rows = pool.install(|| {
        ks.par_iter()
            .map(|&k| {
                let (t, c1) = clamp_unit(f(k)?)?;
                let (t_alt, c2) = match &alt {
                    Some(g) => {
                        let (v, c) = clamp_unit(g(k)?)?;
                        (Some(v), c)
                    }
                    None => (None, false),
                };
                Ok((Row { k, t, t_alt }, c1 as usize + c2 as usize))
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let clamped = rows.iter().map(|(_, c)| c).sum();
    Ok((rows.into_iter().map(|(r, _)| r).collect(), clamped))
}

pub fn stamp_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub(crate) fn warn_clamped(clamped: usize) {
    if clamped > 0 {
        eprintln!("warning: {clamped} value(s) marginally above 1 clamped to 1");
    }
}

pub(crate) fn write_output(table: &SpectrumTable, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => table.write_file(p),
        None => Ok(()),
    }
}

/// Evaluates the configured mode over the k-grid and writes the CSV if an
/// output path is set.
pub fn cmd_spectrum(config: &SweepConfig) -> CliResult<SpectrumTable> {
    let eval = Evaluator::from_config(config)?;
    let mut ks = linear_grid(config.k_min, config.k_max, config.k_points);
    if config.refine {
        refine_grid(&mut ks, config.theta, config.n, config.h)?;
    }
    let alt = config.check.then_some(|k| eval.alternative(k));
    let (rows, clamped) = evaluate_rows(&ks, config.threads, |k| eval.transmission(k), alt)?;
    warn_clamped(clamped);

    let mut table = SpectrumTable::default();
    table.push_meta("tool", format!("dpcomb {VERSION}"));
    table.push_meta("command", "spectrum");
    table.push_meta("theta", config.theta);
    table.push_meta("n", config.n);
    table.push_meta("mode", config.mode.name());
    match config.epsilon {
        Some(e) => table.push_meta("epsilon", e),
        None => table.push_meta("epsilon", "none"),
    }
    table.push_meta("spacing", config.h);
    if let Some(p) = &config.potential {
        table.push_meta("potential", p.display());
    }
    table.push_meta("k_min", config.k_min);
    table.push_meta("k_max", config.k_max);
    table.push_meta("points", config.k_points);
    table.push_meta("refine", config.refine);
    if config.check {
        table.push_meta("T_alt", eval.alternative_name());
    }
    if config.stamp {
        table.push_meta("stamp", stamp_now());
    }
    table.rows = rows;
    write_output(&table, config.output_path.as_deref())?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ends_exact() {
        let g = linear_grid(0.0, PI, 2001);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[2000], PI);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn refine_adds_points_around_each_resonance() {
        let mut g = linear_grid(0.0, PI, 101);
        refine_grid(&mut g, 0.3, 5, 1.0).unwrap();
        let set = resonances(0.3, 5).unwrap();
        for kj in &set.points {
            assert!(g.contains(kj));
        }
        assert!(g.len() >= 101 + 4 * (REFINE_POINTS - 1));
        assert!(g.len() <= 101 + 4 * REFINE_POINTS);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_validation() {
        let base = SweepConfig::new(0.3, 4, Mode::Ideal);
        base.validate().unwrap();
        let mut c = base.clone();
        c.k_points = 1;
        assert!(matches!(c.validate(), Err(CliError::Usage(_))));
        let mut c = base.clone();
        c.k_min = 2.0;
        c.k_max = 1.0;
        assert!(c.validate().is_err());
        assert!(base.clone().with_epsilon(0.1).validate().is_err());
        assert!(SweepConfig::new(0.3, 4, Mode::Oracle).validate().is_err());
        SweepConfig::new(0.3, 4, Mode::Oracle)
            .with_epsilon(0.1)
            .validate()
            .unwrap();
    }

    #[test]
    fn ideal_spectrum_rows() {
        let mut c = SweepConfig::new(0.3, 5, Mode::Ideal);
        c.k_points = 101;
        c.check = true;
        let t = cmd_spectrum(&c).unwrap();
        t.validate().unwrap();
        assert_eq!(t.rows.len(), 101);
        for r in &t.rows {
            assert!((r.t - r.t_alt.unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn transparent_comb() {
        let mut c = SweepConfig::new(1.0, 7, Mode::Ideal);
        c.k_points = 50;
        let t = cmd_spectrum(&c).unwrap();
        assert!(t.rows.iter().all(|r| r.t == 1.0));
    }

    #[test]
    fn oracle_at_zero_matches_neighbour() {
        let spec = DipoleArraySpec::new(example_potential(0.5).unwrap(), 3, 0.1, 1.0).unwrap();
        let t0 = oracle_transmission(&spec, 0.0).unwrap();
        let t1 = oracle_transmission(&spec, 1e-4).unwrap();
        assert!((t0 - t1).abs() < 1e-5, "{t0} {t1}");
    }
}
