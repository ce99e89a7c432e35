//! Config-driven verification runs: schema-checked [`ExperimentConfig`],
//! deterministic [`Report`]s and CSV curve tables.

mod config;
mod curves;
mod report;
mod run;

pub use config::{CheckKind, ExperimentConfig, LawConfig, ToleranceConfig};
pub use curves::emit_curves;
pub use report::{CheckResult, CorrOutcome, Outcome, Provenance, Report, TauOutcome, Timing};
pub use run::{run_experiment, tau_table, TauRow};
