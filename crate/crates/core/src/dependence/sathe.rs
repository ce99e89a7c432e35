use serde::{Deserialize, Serialize};

use crate::order_stats::{exact_min_corr, RateVector};
use crate::Result;

/// Slack allowed for rounding when both sides are computed identically.
const SATHE_TOLERANCE: f64 = 1e-12;

/// `corr(X_{1:n}, X_{j:n})` against `corr(Y_{1:n}, Y_{j:n})` for the
/// homogenized sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatheComparison {
    pub j: usize,
    pub heterogeneous: f64,
    pub homogeneous: f64,
    pub violation: f64,
    pub holds: bool,
}

pub fn sathe_check(rv: &RateVector, j: usize) -> Result<SatheComparison> {
    let heterogeneous = exact_min_corr(rv, j)?;
    let homogeneous = exact_min_corr(&rv.homogenize(), j)?;
    let violation = (heterogeneous - homogeneous).max(0.0);
    Ok(SatheComparison {
        j,
        heterogeneous,
        homogeneous,
        violation,
        holds: violation <= SATHE_TOLERANCE,
    })
}
