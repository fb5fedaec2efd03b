//! CSV serialization of transmission curves.
//!
//! ```text
//! # tool=dpcomb 0.1.0
//! # theta=0.3
//! k,T
//! 0.0000000000000000e0,1.2345678901234567e-2
//! ```
//!
//! Values are written with 17 significant digits, which round-trips every `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Values above 1 by at most this much are clamped to 1; larger ones are rejected.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub k: f64,
    pub t: f64,
    pub t_alt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub meta: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

impl SpectrumTable {
    pub fn has_alt(&self) -> bool {
        self.rows.first().is_some_and(|r| r.t_alt.is_some())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn ks(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.k).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Checks that rows are sorted by `k`, values lie in `[0, 1]` and the
    /// optional column is present on every row or none.
    pub fn validate(&self) -> CliResult<()> {
        let alt = self.has_alt();
        for (i, r) in self.rows.iter().enumerate() {
            let bad = |msg: String| CliError::Table { line: i + 1, msg };
            if r.t_alt.is_some() != alt {
                return Err(bad("inconsistent column count".into()));
            }
            if i > 0 && !(self.rows[i - 1].k < r.k) {
                return Err(bad(format!("k = {} not increasing", r.k)));
            }
            for v in std::iter::once(r.t).chain(r.t_alt) {
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(format!("value {v} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(if self.has_alt() { "k,T,T_alt\n" } else { "k,T\n" });
        for r in &self.rows {
            out.push_str(&format_value(r.k));
            out.push(',');
            out.push_str(&format_value(r.t));
            if let Some(a) = r.t_alt {
                out.push(',');
                out.push_str(&format_value(a));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut table = SpectrumTable::default();
        let mut columns = None;
        for (i, line) in text.lines().enumerate() {
            let bad = |msg: String| CliError::Table { line: i + 1, msg };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| bad(format!("metadata line without '=': {line}")))?;
                table.meta.push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            let Some(width) = columns else {
                columns = Some(match line {
                    "k,T" => 2,
                    "k,T,T_alt" => 3,
                    _ => return Err(bad(format!("unknown column header {line:?}"))),
                });
                continue;
            };
            let fields = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| bad(format!("{f:?}: {e}"))))
                .collect::<CliResult<Vec<f64>>>()?;
            if fields.len() != width {
                return Err(bad(format!("expected {width} fields, found {}", fields.len())));
            }
            table.rows.push(Row {
                k: fields[0],
                t: fields[1],
                t_alt: fields.get(2).copied(),
            });
        }
        if columns.is_none() {
            return Err(CliError::Table {
                line: text.lines().count(),
                msg: "missing column header".into(),
            });
        }
        Ok(table)
    }

    pub fn write_file(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_csv()).map_err(|e| CliError::io(path, e))
    }

    pub fn read_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}

/// Clamps `t` into `[0, 1]`, returning whether it was marginally above 1.
pub fn clamp_unit(t: f64) -> CliResult<(f64, bool)> {
    if (0.0..=1.0).contains(&t) {
        Ok((t, false))
    } else if t > 1.0 && t <= 1.0 + CLAMP_TOL {
        Ok((1.0, true))
    } else {
        Err(dpcomb::Error::NumericalCorruption(format!("transmission {t} outside [0, 1]")).into())
    }
}
