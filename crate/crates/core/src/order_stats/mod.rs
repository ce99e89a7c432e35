//! Exact laws of order statistics, generalized spacings and conditional
//! distributions for independent exponentials with rates `λ_1, …, λ_n`,
//! and their homogeneous counterparts at the mean rate.

mod conditional;
mod monte_carlo;
mod rate_vector;
mod spacing;

pub use conditional::{conditional_family, ConditionalFamily, ConditionalLaw, IndependentFamily};
pub use monte_carlo::{sample_min_pairs, sample_order_statistics, sample_spacings};
pub use rate_vector::RateVector;
pub use spacing::{spacing_law, SpacingMixture, MAX_EXACT_N};

use crate::dist::{ContinuousDist, Exponential};
use crate::{Error, Result};

/// Law of `X_{1:n}`: exponential with the total rate.
pub fn min_law(rv: &RateVector) -> Exponential {
    Exponential::new(rv.total_rate()).expect("rate vectors have a positive total")
}

/// `P(X_{i:n} <= t)`, i.e. the probability that at least `i` of the
/// independent events `{X_m <= t}` occur, by the Poisson-binomial recursion.
pub fn order_stat_cdf(rv: &RateVector, i: usize, t: f64) -> Result<f64> {
    let n = rv.len();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "order index {i} not in 1..={n}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain {
            value: t,
            domain: "finite reals",
        });
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    // counts[k] = P(exactly k of the first m variables are <= t)
    let mut counts = vec![0.0; n + 1];
    counts[0] = 1.0;
    for (m, &rate) in rv.rates().iter().enumerate() {
        let alive = (-rate * t).exp();
        let dead = -(-rate * t).exp_m1();
        for k in (1..=m + 1).rev() {
            counts[k] = counts[k] * alive + counts[k - 1] * dead;
        }
        counts[0] *= alive;
    }
    Ok(counts[i..].iter().sum::<f64>().clamp(0.0, 1.0))
}

/// Pearson correlation of `(X_{1:n}, X_{i:n})`.
///
/// The spacing `X_{i:n} - X_{1:n}` is independent of the minimum, so the
/// covariance equals `Var(X_{1:n}) = 1/Λ²` and the correlation reduces to
/// `sd(X_{1:n}) / sd(X_{i:n})`.
pub fn exact_min_corr(rv: &RateVector, i: usize) -> Result<f64> {
    if i < 2 || i > rv.len() {
        return Err(Error::IndexOutOfRange(format!(
            "correlation with the minimum needs 2 <= i <= {}, got {i}",
            rv.len()
        )));
    }
    let var_min = min_law(rv).variance();
    let var_spacing = spacing_law(rv, 1, i)?.variance();
    Ok((var_min / (var_min + var_spacing)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(r: &[f64]) -> RateVector {
        RateVector::new(r.to_vec()).unwrap()
    }

    #[test]
    fn min_law_sums_rates() {
        assert_eq!(min_law(&rv(&[1.0, 2.0, 3.0])).rate(), 6.0);
        assert_eq!(min_law(&rv(&[2.0, 2.0, 2.0])).rate(), 6.0);
        let r = rv(&[0.5, 1.0, 2.0, 8.0]);
        assert_eq!(min_law(&r), min_law(&r.homogenize()));
    }

    #[test]
    fn max_of_two() {
        let r = rv(&[1.0, 2.0]);
        for t in [0.05f64, 0.3, 1.0, 2.2, 7.0] {
            let expected = 1.0 - (-t).exp() - (-2.0 * t).exp() + (-3.0 * t).exp();
            assert!((order_stat_cdf(&r, 2, t).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn first_order_statistic_is_min() {
        let r = rv(&[0.5, 1.0, 2.0, 8.0]);
        for &t in &[0.01, 0.1, 0.4] {
            let v = order_stat_cdf(&r, 1, t).unwrap();
            assert!((v - min_law(&r).cdf(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn order_stat_index_checked() {
        let r = rv(&[1.0, 2.0]);
        assert!(order_stat_cdf(&r, 0, 1.0).is_err());
        assert!(order_stat_cdf(&r, 3, 1.0).is_err());
        assert!(order_stat_cdf(&r, 1, f64::NAN).is_err());
        assert_eq!(order_stat_cdf(&r, 2, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn correlation_closed_forms() {
        let c = exact_min_corr(&rv(&[1.0, 2.0]), 2).unwrap();
        assert!((c - 2.0 / 33f64.sqrt()).abs() < 1e-15);
        let c = exact_min_corr(&rv(&[1.5, 1.5]), 2).unwrap();
        assert!((c - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!(exact_min_corr(&rv(&[1.0, 2.0]), 1).is_err());
        assert!(exact_min_corr(&rv(&[1.0, 2.0]), 3).is_err());
    }

    #[test]
    fn homogeneous_correlation_decomposition() {
        let r = rv(&[0.7, 0.7, 0.7, 0.7]);
        let lam = 0.7;
        for i in 2..=4 {
            let var_min = 1.0 / (16.0 * lam * lam);
            let var_sp: f64 = (1..i).map(|k| 1.0 / ((4 - k) as f64 * lam).powi(2)).sum();
            let expected = (var_min / (var_min + var_sp)).sqrt();
            assert!((exact_min_corr(&r, i).unwrap() - expected).abs() < 1e-14);
        }
    }
}
