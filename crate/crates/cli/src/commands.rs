//! The `resonances` and `envelope` subcommands.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use dpcomb::{canonical_theta, envelope, resonances, transmission_closed_form};

use crate::error::{CliError, CliResult};
use crate::sweep::{evaluate_rows, linear_grid, stamp_now, warn_clamped, write_output, DEFAULT_POINTS, VERSION};
use crate::table::SpectrumTable;

/// One line per resonance: `j`, `k_j` and `T_n(θ, k_j)` with 9 decimals.
pub fn cmd_resonances(theta: f64, n: usize, h: f64) -> CliResult<String> {
    if n < 2 {
        return Err(dpcomb::Error::Domain(format!("resonances need n >= 2, got {n}")).into());
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Usage(format!("--spacing must be positive, got {h}")));
    }
    let canonical = canonical_theta(theta)?;
    if canonical == 1.0 {
        return Err(dpcomb::Error::Domain("theta = ±1 is transparent: no isolated resonances".into()).into());
    }
    let set = resonances(theta, n)?;
    let mut out = String::new();
    let _ = writeln!(out, "# theta={theta} n={n} spacing={h}");
    let _ = writeln!(out, "{:>4}  {:>20}  {:>11}", "j", "k_j", "T(k_j)");
    for (j, &kj) in set.points.iter().enumerate() {
        let t = transmission_closed_form(theta, kj, n)?;
        let _ = writeln!(out, "{:>4}  {:>20.16}  {:>11.9}", j + 1, kj / h, t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeConfig {
    pub theta: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    /// Adds a `T_alt` column with `min_{n <= min_n} T_n(θ, k)`.
    pub min_n: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub threads: Option<usize>,
    pub stamp: bool,
}

impl EnvelopeConfig {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            k_min: 0.0,
            k_max: PI,
            k_points: DEFAULT_POINTS,
            min_n: None,
            output_path: None,
            threads: None,
            stamp: false,
        }
    }
}

pub fn min_over_n(theta: f64, k: f64, max_n: usize) -> dpcomb::Result<f64> {
    let mut best = f64::INFINITY;
    for n in 1..=max_n {
        best = best.min(transmission_closed_form(theta, k, n)?);
    }
    Ok(best)
}

pub fn cmd_envelope(config: &EnvelopeConfig) -> CliResult<SpectrumTable> {
    if config.k_points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {}",
            config.k_points
        )));
    }
    if !(config.k_min < config.k_max) {
        return Err(CliError::Usage(format!(
            "need k-min < k-max, got {} and {}",
            config.k_min, config.k_max
        )));
    }
    if config.min_n == Some(0) {
        return Err(CliError::Usage("--min-n must be at least 1".into()));
    }
    let theta = config.theta;
    dpcomb::passband(theta)?;
    let ks = linear_grid(config.k_min, config.k_max, config.k_points);
    let alt = config.min_n.map(|m| move |k| Ok(min_over_n(theta, k, m)?));
    let (rows, clamped) = evaluate_rows(&ks, config.threads, |k| Ok(envelope(theta, k)?), alt)?;
    warn_clamped(clamped);

    let mut table = SpectrumTable::default();
    table.push_meta("tool", format!("dpcomb {VERSION}"));
    table.push_meta("command", "envelope");
    table.push_meta("theta", theta);
    table.push_meta("k_min", config.k_min);
    table.push_meta("k_max", config.k_max);
    table.push_meta("points", config.k_points);
    if let Some(m) = config.min_n {
        table.push_meta("T_alt", format!("min_n<={m}"));
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
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn resonance_table_layout() {
        let text = cmd_resonances(0.2, 4, 1.0).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        let middle: Vec<&str> = lines[3].split_whitespace().collect();
        assert_eq!(middle[0], "2");
        assert_eq!(middle[1].parse::<f64>().unwrap(), FRAC_PI_2);
        assert_eq!(middle[2], "1.000000000");
        let widths: Vec<usize> = lines[1..].iter().map(|l| l.len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn resonance_domain_errors() {
        assert_eq!(cmd_resonances(0.5, 1, 1.0).unwrap_err().exit_code(), 2);
        assert_eq!(cmd_resonances(1.0, 4, 1.0).unwrap_err().exit_code(), 2);
        assert_eq!(cmd_resonances(0.0, 4, 1.0).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn envelope_at_centre() {
        let mut c = EnvelopeConfig::new(0.4);
        c.k_points = 3;
        let t = cmd_envelope(&c).unwrap();
        let z = t.rows[1].t;
        assert!((z - 4.0 * 0.16 / (1.16f64).powi(2)).abs() < 1e-15);
        assert_eq!(t.rows[0].t, 0.0);
    }

    #[test]
    fn envelope_min_column() {
        let mut c = EnvelopeConfig::new(0.3);
        c.k_points = 201;
        c.min_n = Some(50);
        let t = cmd_envelope(&c).unwrap();
        assert!(t.has_alt());
        assert!(t.rows.iter().all(|r| r.t_alt.unwrap() >= r.t - 1e-12));
    }

    #[test]
    fn envelope_rejects_theta_outside_unit() {
        assert_eq!(cmd_envelope(&EnvelopeConfig::new(2.0)).unwrap_err().exit_code(), 2);
    }
}
