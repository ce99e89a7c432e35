use serde::{Deserialize, Serialize};

use super::tau::empirical_tau;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcordanceSource {
    Exact,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcordanceReport {
    pub kendall_tau: f64,
    pub spearman_rho: f64,
    pub pearson_corr: f64,
    pub source: ConcordanceSource,
}

impl ConcordanceReport {
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Ok(Self {
            kendall_tau: empirical_tau(pairs)?,
            spearman_rho: empirical_rho(pairs)?,
            pearson_corr: pearson(pairs)?,
            source: ConcordanceSource::Empirical,
        })
    }
}

/// Pearson correlation coefficient.
pub fn pearson(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput(
            "correlation needs at least 2 pairs".into(),
        ));
    }
    let m = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::Degenerate("a coordinate has zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Mid-ranks (ties share the average rank), one-based.
fn mid_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the coordinate ranks.
pub fn empirical_rho(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput("rho needs at least 2 pairs".into()));
    }
    let rx = mid_ranks(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let ry = mid_ranks(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let ranked: Vec<(f64, f64)> = rx.into_iter().zip(ry).collect();
    pearson(&ranked)
}
