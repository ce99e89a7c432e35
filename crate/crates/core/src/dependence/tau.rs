use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dist::ln_gamma;
use crate::{Error, Result};

/// Largest `n` evaluated with exact rational arithmetic.
pub const MAX_RATIONAL_N: usize = 60;
const QUADRATIC_TAU_LIMIT: usize = 20_000;

fn check_indices(n: usize, i: usize) -> Result<()> {
    if n < 2 || i < 2 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "Kendall's tau of (Y_1:n, Y_i:n) needs n >= 2 and 2 <= i <= n, got n = {n}, i = {i}"
        )));
    }
    Ok(())
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Kendall's tau of `(Y_{1:n}, Y_{i:n})` for an i.i.d. continuous sample,
///
/// `1 - 2(n-1)/(2n-1) * C(n-2, i-2) * Σ_{s=0}^{n-i} C(n, s) / C(2n-2, n-i+s)`,
///
/// as an exact rational.
pub fn exact_tau_min_pair_rational(n: usize, i: usize) -> Result<BigRational> {
    check_indices(n, i)?;
    let mut sum = BigRational::zero();
    for s in 0..=n - i {
        sum += BigRational::new(binomial_big(n, s), binomial_big(2 * n - 2, n - i + s));
    }
    let lead = BigRational::new(BigInt::from(2 * (n - 1)), BigInt::from(2 * n - 1))
        * BigRational::from_integer(binomial_big(n - 2, i - 2));
    Ok(BigRational::one() - lead * sum)
}

/// Exact for `n <= MAX_RATIONAL_N`, floating evaluation beyond.
pub fn exact_tau_min_pair(n: usize, i: usize) -> Result<f64> {
    if n <= MAX_RATIONAL_N {
        let r = exact_tau_min_pair_rational(n, i)?;
        r.to_f64()
            .ok_or_else(|| Error::Degenerate("rational tau not representable".into()))
    } else {
        tau_min_pair_float(n, i)
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// The same formula in floating point: direct products while the binomials
/// stay finite, log-gamma ratios beyond.
pub fn tau_min_pair_float(n: usize, i: usize) -> Result<f64> {
    check_indices(n, i)?;
    let direct = binomial_f64(2 * n - 2, n - 1).is_finite();
    let ratio = |s: usize| {
        if direct {
            binomial_f64(n, s) / binomial_f64(2 * n - 2, n - i + s)
        } else {
            (ln_binomial(n, s) - ln_binomial(2 * n - 2, n - i + s)).exp()
        }
    };
    let sum: f64 = (0..=n - i).map(ratio).sum();
    let lead = 2.0 * (n - 1) as f64 / (2 * n - 1) as f64;
    let choose = if direct {
        binomial_f64(n - 2, i - 2)
    } else {
        ln_binomial(n - 2, i - 2).exp()
    };
    Ok(1.0 - lead * choose * sum)
}

fn check_pairs(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "concordance needs at least 2 pairs, got {}",
            pairs.len()
        )));
    }
    if pairs.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidInput("non-finite pair".into()));
    }
    let all_x = pairs.iter().all(|p| p.0 == pairs[0].0);
    let all_y = pairs.iter().all(|p| p.1 == pairs[0].1);
    if all_x || all_y {
        return Err(Error::Degenerate("a coordinate is constant".into()));
    }
    Ok(())
}

/// Sample Kendall's tau `(concordant - discordant) / C(m, 2)`; tied pairs
/// count as neither.
pub fn empirical_tau(pairs: &[(f64, f64)]) -> Result<f64> {
    check_pairs(pairs)?;
    let m = pairs.len();
    let total = (m as f64) * (m as f64 - 1.0) / 2.0;
    let net = if m <= QUADRATIC_TAU_LIMIT {
        net_concordance_quadratic(pairs)
    } else {
        net_concordance_merge(pairs)
    };
    Ok(net as f64 / total)
}

pub(crate) fn net_concordance_quadratic(pairs: &[(f64, f64)]) -> i64 {
    let mut net = 0i64;
    for (a, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[a + 1..] {
            let s = (x1 - x2).signum() * (y1 - y2).signum();
            if x1 != x2 && y1 != y2 {
                net += s as i64;
            }
        }
    }
    net
}

fn tied_pairs<T: PartialEq>(sorted: &[T]) -> i64 {
    let mut total = 0i64;
    let mut run = 1i64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Knight's O(m log m) algorithm.
pub(crate) fn net_concordance_merge(pairs: &[(f64, f64)]) -> i64 {
    let m = pairs.len() as i64;
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let xs: Vec<f64> = sorted.iter().map(|p| p.0).collect();
    let x_ties = tied_pairs(&xs);
    let joint_ties = tied_pairs(&sorted);
    let mut ys: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; ys.len()];
    let swaps = merge_count(&mut ys, &mut buf);
    let y_ties = tied_pairs(&ys);
    m * (m - 1) / 2 - x_ties - y_ties + joint_ties - 2 * swaps
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> i64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], &mut buf[..mid]);
    swaps += merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut a, mut b, mut k) = (0, mid, 0);
    while a < mid && b < n {
        if v[b] < v[a] {
            buf[k] = v[b];
            swaps += (mid - a) as i64;
            b += 1;
        } else {
            buf[k] = v[a];
            a += 1;
        }
        k += 1;
    }
    buf[k..k + mid - a].copy_from_slice(&v[a..mid]);
    k += mid - a;
    buf[k..k + n - b].copy_from_slice(&v[b..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::SampleStream;
    use proptest::prelude::*;

    #[test]
    fn closed_form_values() {
        let third = exact_tau_min_pair_rational(2, 2).unwrap();
        assert_eq!(third, BigRational::new(1.into(), 3.into()));
        let fifth = exact_tau_min_pair_rational(3, 3).unwrap();
        assert_eq!(fifth, BigRational::new(1.into(), 5.into()));
        // 1 - (4/5) * (1/4 + 3/6)
        let two_of_three = exact_tau_min_pair_rational(3, 2).unwrap();
        assert_eq!(two_of_three, BigRational::new(2.into(), 5.into()));
    }

    #[test]
    fn index_validation() {
        assert!(exact_tau_min_pair(3, 1).is_err());
        assert!(exact_tau_min_pair(3, 4).is_err());
        assert!(exact_tau_min_pair(1, 1).is_err());
    }

    #[test]
    fn rational_and_float_routes_agree() {
        for n in 2..=30 {
            for i in 2..=n {
                let a = exact_tau_min_pair(n, i).unwrap();
                let b = tau_min_pair_float(n, i).unwrap();
                assert!((a - b).abs() <= 1e-12, "n={n} i={i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn large_n_float_route_is_sane() {
        for &n in &[61, 100, 400, 800] {
            let v = exact_tau_min_pair(n, 2).unwrap();
            assert!(v > 0.0 && v < 1.0, "n={n}: {v}");
            let w = exact_tau_min_pair(n, n).unwrap();
            assert!(w > 0.0 && w < v);
        }
    }

    #[test]
    fn monotone_pairs() {
        let up: Vec<(f64, f64)> = (0..50).map(|k| (k as f64, (k * k) as f64)).collect();
        assert_eq!(empirical_tau(&up).unwrap(), 1.0);
        let down: Vec<(f64, f64)> = (0..50).map(|k| (k as f64, -(k as f64))).collect();
        assert_eq!(empirical_tau(&down).unwrap(), -1.0);
        assert!(empirical_tau(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(empirical_tau(&[(1.0, 2.0)]).is_err());
    }

    #[test]
    fn merge_route_on_large_input() {
        let mut s = SampleStream::new(17, 0);
        let pairs: Vec<(f64, f64)> = (0..3000)
            .map(|_| {
                let x = s.uniform();
                (x, x + s.uniform())
            })
            .collect();
        assert_eq!(
            net_concordance_merge(&pairs),
            net_concordance_quadratic(&pairs)
        );
    }

    proptest! {
        #[test]
        fn merge_matches_quadratic_with_ties(
            raw in prop::collection::vec((0u8..6, 0u8..6), 2..120)
        ) {
            let pairs: Vec<(f64, f64)> = raw.iter().map(|&(a, b)| (a as f64, b as f64)).collect();
            prop_assert_eq!(net_concordance_merge(&pairs), net_concordance_quadratic(&pairs));
        }
    }
}
