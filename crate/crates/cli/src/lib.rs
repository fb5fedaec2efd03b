//! Parameter sweeps, resonance tables and verification runs for δ'_θ-combs.

pub mod commands;
pub mod error;
pub mod sweep;
pub mod table;
pub mod verify;

pub use commands::{cmd_envelope, cmd_resonances, EnvelopeConfig};
pub use error::{CliError, CliResult};
pub use sweep::{cmd_spectrum, Mode, SweepConfig};
pub use table::{Row, SpectrumTable};
pub use verify::{cmd_verify, verify, verify_with, Level, Report};
