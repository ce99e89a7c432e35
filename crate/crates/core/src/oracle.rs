//! Brute-force ground truth for the exact spacing laws and the self-test
//! suite built on it.
//!
//! The permutation oracle enumerates all `n!` failure orders, weighting each
//! by `Π λ_{π_k} / Σ_{l >= k} λ_{π_l}`; it shares nothing with the subset
//! recursion except the hypoexponential cdf kernel. The convolution route
//! integrates the minimum's density against the spacing law and is compared
//! with the Poisson-binomial marginal.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{invert_cdf, ContinuousDist, Hypoexponential, SampleStream};
use crate::order_stats::{min_law, order_stat_cdf, spacing_law, RateVector};
use crate::orders::GridSpec;
use crate::{Error, Result};

/// Largest `n` accepted by the permutation oracle.
pub const MAX_ORACLE_N: usize = 8;
pub const SPACING_TOLERANCE: f64 = 1e-12;
pub const MARGINAL_TOLERANCE: f64 = 1e-8;
const SIMPSON_TOLERANCE: f64 = 1e-9;

/// Spacing law of `X_{j:n} - X_{i:n}` as an unmerged mixture over all `n!`
/// failure orders.
#[derive(Debug, Clone)]
pub struct PermutationOracle {
    chains: Vec<(f64, Hypoexponential)>,
}

impl PermutationOracle {
    pub fn new(rv: &RateVector, i: usize, j: usize) -> Result<Self> {
        let n = rv.len();
        if n > MAX_ORACLE_N {
            return Err(Error::TooLarge(format!(
                "permutation oracle supports n <= {MAX_ORACLE_N}"
            )));
        }
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::IndexOutOfRange(format!("({i}, {j}) for n = {n}")));
        }
        let rates = rv.rates();
        let mut chains = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let remaining = |k: usize| perm[k..].iter().map(|&x| rates[x]).sum::<f64>();
            let weight: f64 = (0..n).map(|k| rates[perm[k]] / remaining(k)).product();
            let stages: Vec<f64> = (i..j).map(remaining).collect();
            chains.push((weight, Hypoexponential::new(&stages)?));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(Self { chains })
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.chains.iter().map(|c| c.0).sum()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        self.chains.iter().map(|(w, h)| w * h.cdf(t)).sum()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut k = n - 1;
    while k > 0 && p[k - 1] >= p[k] {
        k -= 1;
    }
    if k == 0 {
        return false;
    }
    let mut l = n - 1;
    while p[l] <= p[k - 1] {
        l -= 1;
    }
    p.swap(k - 1, l);
    p[k..].reverse();
    true
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `P(X_{i:n} <= t)` as `∫_0^t f_min(x) P(X_{i:n} - X_{1:n} <= t - x) dx`.
pub fn order_stat_cdf_by_convolution(rv: &RateVector, i: usize, t: f64) -> Result<f64> {
    let min = min_law(rv);
    if i == 1 {
        return Ok(min.cdf(t));
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    let spacing = spacing_law(rv, 1, i)?;
    let lam = min.rate();
    let integrand = |x: f64| lam * (-lam * x).exp() * spacing.cdf(t - x);
    Ok(adaptive_simpson(&integrand, 0.0, t, SIMPSON_TOLERANCE))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestCase {
    pub rates: Vec<f64>,
    pub i: usize,
    pub j: usize,
    pub spacing_max_diff: f64,
    pub marginal_index: usize,
    pub marginal_max_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub max_n: usize,
    pub spacing_tolerance: f64,
    pub marginal_tolerance: f64,
    pub spacing_max_diff: f64,
    pub marginal_max_diff: f64,
    pub passed: bool,
    pub cases: Vec<SelftestCase>,
}

/// Random rate vectors with `2 <= n <= max_n`; for each, one random spacing
/// `(i, j)` compared with the permutation oracle on the default u-grid, and
/// one random order statistic compared with the convolution route on the
/// coarse `k/20` grid.
pub fn selftest(max_n: usize, seed: u64, vectors: usize) -> Result<SelftestReport> {
    if !(2..=MAX_ORACLE_N).contains(&max_n) {
        return Err(Error::InvalidInput(format!(
            "max_n must be in 2..={MAX_ORACLE_N}"
        )));
    }
    let grid = GridSpec::default();
    let cases: Vec<SelftestCase> = (0..vectors as u64)
        .into_par_iter()
        .map(|k| {
            let mut s = SampleStream::new(seed, k);
            let n = 2 + s.index_below(max_n - 1);
            // log-uniform on [0.1, 10]
            let rates: Vec<f64> = (0..n)
                .map(|_| 10f64.powf(2.0 * s.uniform() - 1.0))
                .collect();
            let rv = RateVector::new(rates.clone())?;
            let i = 1 + s.index_below(n - 1);
            let j = i + 1 + s.index_below(n - i);
            let law = spacing_law(&rv, i, j)?;
            let oracle = PermutationOracle::new(&rv, i, j)?;
            let mut spacing_max_diff = 0.0f64;
            for u in grid.u_points() {
                let t = law.quantile(u)?;
                spacing_max_diff = spacing_max_diff.max((law.cdf(t) - oracle.cdf(t)).abs());
            }
            let mi = 2 + s.index_below(n - 1);
            let mut marginal_max_diff = 0.0f64;
            for u in grid.pq_points() {
                let t = invert_cdf(|x| order_stat_cdf(&rv, mi, x).unwrap_or(0.0), u, 0.0, 1.0)?;
                let direct = order_stat_cdf(&rv, mi, t)?;
                let conv = order_stat_cdf_by_convolution(&rv, mi, t)?;
                marginal_max_diff = marginal_max_diff.max((direct - conv).abs());
            }
            Ok(SelftestCase {
                rates,
                i,
                j,
                spacing_max_diff,
                marginal_index: mi,
                marginal_max_diff,
            })
        })
        .collect::<Result<_>>()?;
    let spacing_max_diff = cases.iter().map(|c| c.spacing_max_diff).fold(0.0, f64::max);
    let marginal_max_diff = cases
        .iter()
        .map(|c| c.marginal_max_diff)
        .fold(0.0, f64::max);
    Ok(SelftestReport {
        seed,
        max_n,
        spacing_tolerance: SPACING_TOLERANCE,
        marginal_tolerance: MARGINAL_TOLERANCE,
        spacing_max_diff,
        marginal_max_diff,
        passed: spacing_max_diff <= SPACING_TOLERANCE && marginal_max_diff <= MARGINAL_TOLERANCE,
        cases,
    })
}
