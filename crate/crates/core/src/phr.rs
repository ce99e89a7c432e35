//! Proportional hazards: component `i` has survival `F̄(t)^{λ_i}` for a
//! common baseline `F̄`. The cumulative hazard `R(t) = -log F̄(t)` maps each
//! component to an exponential with rate `λ_i`, and since copulas are
//! invariant under increasing transforms of the margins, dependence results
//! for exponentials carry over unchanged.

use serde::{Deserialize, Serialize};

use crate::dependence::{empirical_copula, DEFAULT_RESOLUTION};
use crate::dist::{ks_distance, ContinuousDist, Dist, Exponential, SampleStream};
use crate::order_stats::{conditional_family, min_law, RateVector};
use crate::orders::{check_more_si, GridDesc, GridSpec, OrderVerdict, Witness};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PhrModel {
    baseline: Dist,
    rates: RateVector,
}

impl PhrModel {
    /// The baseline must be continuous with support starting at 0.
    pub fn new(baseline: impl Into<Dist>, rates: RateVector) -> Result<Self> {
        let baseline = baseline.into();
        if matches!(baseline, Dist::Empirical(_) | Dist::Uniform(_)) {
            return Err(Error::InvalidParameter(format!(
                "{} baseline has no strictly decreasing survival on (0, inf)",
                baseline.kind()
            )));
        }
        if baseline.support_lower() != 0.0 {
            return Err(Error::InvalidParameter(
                "baseline support must start at 0".into(),
            ));
        }
        Ok(Self { baseline, rates })
    }

    pub fn baseline(&self) -> &Dist {
        &self.baseline
    }

    pub fn rates(&self) -> &RateVector {
        &self.rates
    }

    /// Same baseline, every exponent replaced by the mean `λ̄`.
    pub fn homogeneous(&self) -> PhrModel {
        PhrModel {
            baseline: self.baseline.clone(),
            rates: self.rates.homogenize(),
        }
    }

    /// Survival of component `k` (zero-based).
    pub fn component_survival(&self, k: usize, t: f64) -> f64 {
        self.baseline.survival(t).powf(self.rates.rates()[k])
    }
}

/// `m` rows of `n` independent draws; component `k` solves
/// `F̄(x)^{λ_k} = U`, i.e. `R(x) = -log(U) / λ_k`.
pub fn phr_sample(model: &PhrModel, stream: &mut SampleStream, m: usize) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(Error::InvalidInput("sample size must be at least 1".into()));
    }
    (0..m)
        .map(|_| {
            model
                .rates
                .rates()
                .iter()
                .map(|&lam| {
                    let e = -stream.uniform_open_low().ln();
                    model.baseline.inverse_cumulative_hazard(e / lam)
                })
                .collect()
        })
        .collect()
}

/// `R(x) = -log F̄(x)`.
pub fn phr_transform(model: &PhrModel, x: f64) -> Result<f64> {
    if !x.is_finite() || x < model.baseline.support_lower() {
        return Err(Error::Domain {
            value: x,
            domain: "baseline support",
        });
    }
    let r = model.baseline.cumulative_hazard(x)?;
    if !r.is_finite() {
        return Err(Error::Domain {
            value: x,
            domain: "points with positive baseline survival",
        });
    }
    Ok(r)
}

/// KS distance of `R(X_k)` against `Exp(λ_k)` for every component.
pub fn transformed_marginal_ks(
    model: &PhrModel,
    stream: &mut SampleStream,
    m: usize,
) -> Result<Vec<f64>> {
    let rows = phr_sample(model, stream, m)?;
    model
        .rates
        .rates()
        .iter()
        .enumerate()
        .map(|(k, &lam)| {
            let xs: Vec<f64> = rows
                .iter()
                .map(|r| phr_transform(model, r[k]))
                .collect::<Result<_>>()?;
            let e = Exponential::new(lam)?;
            Ok(ks_distance(&xs, |x| e.cdf(x)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhrVerdict {
    pub i: usize,
    /// More-SI comparison after reduction to the exponential case.
    pub si: OrderVerdict,
    /// Empirical copula of `(X_{1:n}, X_{i:n})` before vs after `R`.
    pub copula_invariance: OrderVerdict,
    pub holds: bool,
}

/// Reduces the PHR comparison of `(X_{i:n} | X_{1:n})` with its homogeneous
/// counterpart to exponential laws, runs the more-SI check there, and checks
/// that the sample copula is unchanged by the transform.
pub fn phr_si_check(
    model: &PhrModel,
    i: usize,
    grid: &GridSpec,
    tolerance: f64,
    samples: usize,
    seed: u64,
) -> Result<PhrVerdict> {
    let rv = &model.rates;
    let homog = rv.homogenize();
    let si = check_more_si(
        &conditional_family(rv, i)?,
        &min_law(rv),
        &conditional_family(&homog, i)?,
        &min_law(&homog),
        grid,
        tolerance,
    )?;

    let mut stream = SampleStream::new(seed, 0);
    let rows = phr_sample(model, &mut stream, samples)?;
    let mut raw = Vec::with_capacity(samples);
    let mut transformed = Vec::with_capacity(samples);
    let mut buf = Vec::with_capacity(rv.len());
    for row in &rows {
        let mut sorted = row.clone();
        sorted.sort_by(f64::total_cmp);
        raw.push((sorted[0], sorted[i - 1]));
        buf.clear();
        for &x in row {
            buf.push(phr_transform(model, x)?);
        }
        buf.sort_by(f64::total_cmp);
        transformed.push((buf[0], buf[i - 1]));
    }
    let before = empirical_copula(&raw, DEFAULT_RESOLUTION)?;
    let after = empirical_copula(&transformed, DEFAULT_RESOLUTION)?;
    let (dist, u, v) = before.sup_distance(&after)?;
    let copula_invariance = OrderVerdict::from_excess(
        "phr_copula_invariance",
        dist,
        Witness::Lattice { u, v },
        GridDesc::Lattice {
            resolution: DEFAULT_RESOLUTION,
        },
        before.confidence_radius(),
    );
    let holds = si.holds && copula_invariance.holds;
    Ok(PhrVerdict {
        i,
        si,
        copula_invariance,
        holds,
    })
}
