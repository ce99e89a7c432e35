use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dist::{Dist, Exponential, Uniform, Weibull};
use crate::order_stats::{RateVector, MAX_EXACT_N};
use crate::orders::{GridSpec, EXACT_TOLERANCE, SI_TOLERANCE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    St,
    Disp,
    Star,
    Si,
    Pqd,
    Tau,
    Corr,
    Phr,
    CopulaFree,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::St => "st",
            CheckKind::Disp => "disp",
            CheckKind::Star => "star",
            CheckKind::Si => "si",
            CheckKind::Pqd => "pqd",
            CheckKind::Tau => "tau",
            CheckKind::Corr => "corr",
            CheckKind::Phr => "phr",
            CheckKind::CopulaFree => "copula-free",
        }
    }

    /// Spacing checks compare `Y_{j:n} - Y_{i:n}` with `X_{j:n} - X_{i:n}`;
    /// the rest are about the pair `(X_{1:n}, X_{j:n})`.
    pub fn is_spacing_check(&self) -> bool {
        matches!(self, CheckKind::St | CheckKind::Disp | CheckKind::Star)
    }
}

/// A named continuous law in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawConfig {
    Exponential {
        #[serde(default = "one")]
        rate: f64,
    },
    Weibull {
        shape: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Uniform {
        #[serde(default)]
        lower: f64,
        #[serde(default = "one")]
        upper: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl LawConfig {
    pub fn build(&self) -> Result<Dist> {
        Ok(match *self {
            LawConfig::Exponential { rate } => Exponential::new(rate)?.into(),
            LawConfig::Weibull { shape, scale } => Weibull::new(shape, scale)?.into(),
            LawConfig::Uniform { lower, upper } => Uniform::new(lower, upper)?.into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "exact_tol")]
    pub exact: f64,
    #[serde(default = "si_tol")]
    pub si: f64,
}

fn exact_tol() -> f64 {
    EXACT_TOLERANCE
}

fn si_tol() -> f64 {
    SI_TOLERANCE
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            exact: EXACT_TOLERANCE,
            si: SI_TOLERANCE,
        }
    }
}

fn default_grid() -> usize {
    200
}
fn default_si_grid() -> usize {
    20
}
fn default_copula_resolution() -> usize {
    50
}
fn default_samples() -> usize {
    100_000
}
fn default_parents() -> [LawConfig; 2] {
    [
        LawConfig::Exponential { rate: 1.0 },
        LawConfig::Uniform {
            lower: 0.0,
            upper: 1.0,
        },
    ]
}

/// One verification run. Field names are part of the config file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub rates: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub checks: Vec<CheckKind>,
    /// `u_k = k / grid`.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// `p, q ∈ { k / si_grid }`.
    #[serde(default = "default_si_grid")]
    pub si_grid: usize,
    #[serde(default = "default_copula_resolution")]
    pub copula_resolution: usize,
    #[serde(default = "default_samples")]
    pub monte_carlo_m: usize,
    /// Required; may be supplied on the command line instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<LawConfig>,
    #[serde(default = "default_parents")]
    pub copula_free_parents: [LawConfig; 2],
    #[serde(default)]
    pub tolerance: ToleranceConfig,
}

fn config_error(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

fn path_of<E: std::fmt::Display>(e: &serde_path_to_error::Error<E>) -> String {
    let p = e.path().to_string();
    if p == "." {
        "<root>".to_string()
    } else {
        p
    }
}

impl ExperimentConfig {
    /// Parses a TOML document. Schema errors carry the offending field path.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let de =
            toml::Deserializer::parse(text).map_err(|e| config_error("<root>", e.to_string()))?;
        serde_path_to_error::deserialize(de)
            .map_err(|e| config_error(path_of(&e), e.inner().message().to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de)
            .map_err(|e| config_error(path_of(&e), e.inner().to_string()))
    }

    /// `.json` files are read as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        }
    }

    pub fn rate_vector(&self) -> Result<RateVector> {
        RateVector::new(self.rates.clone()).map_err(|e| config_error("rates", e.to_string()))
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            u_resolution: self.grid,
            pq_resolution: self.si_grid,
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.master_seed.ok_or_else(|| {
            config_error(
                "master_seed",
                "a seed is required (set master_seed or pass --seed)",
            )
        })
    }

    /// Semantic checks beyond the schema.
    pub fn validate(&self) -> Result<()> {
        let rv = self.rate_vector()?;
        let n = rv.len();
        self.seed()?;
        if self.checks.is_empty() {
            return Err(config_error("checks", "at least one check is required"));
        }
        for (k, c) in self.checks.iter().enumerate() {
            if self.checks[..k].contains(c) {
                return Err(config_error(
                    format!("checks[{k}]"),
                    format!("duplicate check `{}`", c.name()),
                ));
            }
        }
        if let Some(i) = self.i {
            if i < 1 || i >= n {
                return Err(config_error(
                    "i",
                    format!("must satisfy 1 <= i < {n}, got {i}"),
                ));
            }
        }
        if let Some(j) = self.j {
            if j < 2 || j > n {
                return Err(config_error(
                    "j",
                    format!("must satisfy 2 <= j <= {n}, got {j}"),
                ));
            }
            if let Some(i) = self.i {
                if i >= j {
                    return Err(config_error("j", format!("must exceed i = {i}, got {j}")));
                }
            }
        }
        let exact = self.checks.iter().any(|c| {
            c.is_spacing_check() || matches!(c, CheckKind::Si | CheckKind::Corr | CheckKind::Phr)
        });
        if exact && n > MAX_EXACT_N {
            return Err(config_error(
                "rates",
                format!("exact checks support at most {MAX_EXACT_N} rates"),
            ));
        }
        if self.grid < 2 {
            return Err(config_error("grid", "must be at least 2"));
        }
        if self.si_grid < 3 {
            return Err(config_error("si_grid", "must be at least 3"));
        }
        if self.copula_resolution < 1 {
            return Err(config_error("copula_resolution", "must be at least 1"));
        }
        if self.monte_carlo_m < 100 {
            return Err(config_error("monte_carlo_m", "must be at least 100"));
        }
        for (name, t) in [
            ("tolerance.exact", self.tolerance.exact),
            ("tolerance.si", self.tolerance.si),
        ] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(config_error(
                    name,
                    format!("must be finite and >= 0, got {t}"),
                ));
            }
        }
        if self.checks.contains(&CheckKind::Phr) {
            let b = self
                .baseline
                .ok_or_else(|| config_error("baseline", "the phr check needs a baseline law"))?;
            b.build()
                .map_err(|e| config_error("baseline", e.to_string()))?;
        }
        for (k, p) in self.copula_free_parents.iter().enumerate() {
            p.build()
                .map_err(|e| config_error(format!("copula_free_parents[{k}]"), e.to_string()))?;
        }
        Ok(())
    }

    /// Spacing pairs `(i, j)`: the configured pair, or every `1 <= i < j <= n`.
    pub fn spacing_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.rates.len();
        match (self.i, self.j) {
            (Some(i), Some(j)) => vec![(i, j)],
            (Some(i), None) => (i + 1..=n).map(|j| (i, j)).collect(),
            (None, Some(j)) => (1..j).map(|i| (i, j)).collect(),
            (None, None) => (1..n)
                .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
                .collect(),
        }
    }

    /// Indices paired with the minimum: `j`, or every `2..=n`.
    pub fn min_pair_indices(&self) -> Vec<usize> {
        match self.j {
            Some(j) => vec![j],
            None => (2..=self.rates.len()).collect(),
        }
    }
}
