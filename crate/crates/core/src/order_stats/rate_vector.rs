use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hazard rates `λ_1, …, λ_n` of an independent exponential sample, `n >= 2`.
///
/// Distinct rates are not required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a rate vector needs at least two rates, got {}",
                rates.len()
            )));
        }
        if let Some(bad) = rates.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "rates must be positive and finite, got {bad}"
            )));
        }
        Ok(Self { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn mean_rate(&self) -> f64 {
        self.total_rate() / self.rates.len() as f64
    }

    /// `n` copies of the mean rate.
    pub fn homogenize(&self) -> RateVector {
        RateVector {
            rates: vec![self.mean_rate(); self.rates.len()],
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rates.iter().all(|&r| r == self.rates[0])
    }
}

impl TryFrom<Vec<f64>> for RateVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        RateVector::new(v)
    }
}

impl From<RateVector> for Vec<f64> {
    fn from(r: RateVector) -> Self {
        r.rates
    }
}
