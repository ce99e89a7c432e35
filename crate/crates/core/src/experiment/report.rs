use serde::{Deserialize, Serialize};

use super::config::{CheckKind, ExperimentConfig};
use crate::dependence::SatheComparison;
use crate::orders::{GridSpec, OrderVerdict};
use crate::phr::PhrVerdict;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub crate_name: String,
    pub code_version: String,
    pub master_seed: u64,
    pub grid: GridSpec,
    pub copula_resolution: usize,
    pub monte_carlo_m: usize,
    /// The config exactly as run, after command-line overrides.
    pub config: ExperimentConfig,
}

/// Exact tau of the homogeneous pair against two sample estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauOutcome {
    pub j: usize,
    pub exact_homogeneous: f64,
    pub empirical_homogeneous: f64,
    pub empirical_heterogeneous: f64,
    /// Allowed sampling error on each empirical value.
    pub band: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrOutcome {
    pub exact: SatheComparison,
    pub sampled_heterogeneous: f64,
    pub sampled_homogeneous: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhrOutcome {
    pub verdict: PhrVerdict,
    /// KS distance of each `R`-transformed component from its exponential law.
    pub marginal_ks: Vec<f64>,
    pub ks_critical: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    Verdict(OrderVerdict),
    Phr(PhrOutcome),
    Tau(TauOutcome),
    Corr(CorrOutcome),
    Error { message: String },
}

impl Outcome {
    pub fn holds(&self) -> bool {
        match self {
            Outcome::Verdict(v) => v.holds,
            Outcome::Phr(p) => p.holds,
            Outcome::Tau(t) => t.holds,
            Outcome::Corr(c) => c.holds,
            Outcome::Error { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: CheckKind,
    /// `check[i,j]` for spacing checks, `check[j]` otherwise.
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<usize>,
    pub j: usize,
    pub holds: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Timing {
    pub total_seconds: f64,
    /// Same order as `results`.
    pub check_seconds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub provenance: Provenance,
    pub results: Vec<CheckResult>,
    pub all_hold: bool,
    pub first_failure: Option<String>,
    /// The only field allowed to differ between runs of one config.
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Copy with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            timing: Timing::default(),
            ..self.clone()
        }
    }
}
