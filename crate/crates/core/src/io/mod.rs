//! Checkpoints, config files and the diagnostics stream.

pub mod checkpoint;
pub mod config;
pub mod diagnostics;

pub use checkpoint::Checkpoint;
pub use config::{parse_config, parse_gronwall_config};
pub use diagnostics::{emit_diagnostics, parse_diagnostics, write_run_output, DiagnosticsStream};
