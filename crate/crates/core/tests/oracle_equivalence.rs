use orderdep::dist::{invert_cdf, ContinuousDist};
use orderdep::oracle::{
    adaptive_simpson, order_stat_cdf_by_convolution, selftest, PermutationOracle,
};
use orderdep::order_stats::{conditional_family, min_law, order_stat_cdf, spacing_law, RateVector};
use orderdep::orders::GridSpec;
use proptest::prelude::*;

fn rates(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2..=max_n)
        .prop_map(|v| v.into_iter().map(|e| 10f64.powf(e)).collect())
}

/// A rate vector with a valid spacing pair `1 <= i < j <= n`.
fn instance(max_n: usize) -> impl Strategy<Value = (Vec<f64>, usize, usize)> {
    rates(max_n).prop_flat_map(|r| {
        let n = r.len();
        (Just(r), 1..n).prop_flat_map(move |(r, i)| (Just(r), Just(i), i + 1..=n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spacing_matches_permutation_oracle((r, i, j) in instance(6)) {
        let rv = RateVector::new(r).unwrap();
        let law = spacing_law(&rv, i, j).unwrap();
        let oracle = PermutationOracle::new(&rv, i, j).unwrap();
        prop_assert!((oracle.weight_sum() - 1.0).abs() < 1e-12);
        for u in GridSpec::default().u_points() {
            let t = law.quantile(u).unwrap();
            let d = (law.cdf(t) - oracle.cdf(t)).abs();
            prop_assert!(d <= 1e-12, "u = {u}, t = {t}, diff = {d:e}");
        }
    }

    #[test]
    fn chain_weights_are_conserved((r, i, j) in instance(8)) {
        let rv = RateVector::new(r).unwrap();
        let law = spacing_law(&rv, i, j).unwrap();
        let total: f64 = law.chains().map(|(w, _)| w).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "{total}");
    }

    #[test]
    fn homogeneous_spacing_is_one_hypoexponential(n in 2usize..=8, lam in 0.1f64..10.0, seed in 0usize..1000) {
        let i = 1 + seed % (n - 1);
        let j = i + 1 + (seed / 7) % (n - i);
        let rv = RateVector::new(vec![lam; n]).unwrap();
        let law = spacing_law(&rv, i, j).unwrap();
        let chains: Vec<_> = law.chains().collect();
        prop_assert_eq!(chains.len(), 1);
        let want: Vec<f64> = (i..j).map(|k| (n - k) as f64 * lam).collect();
        let got = chains[0].1.stage_rates();
        prop_assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-12 * w);
        }
    }

    #[test]
    fn min_plus_spacing_reproduces_marginal(r in rates(6), pick in 0usize..100) {
        let rv = RateVector::new(r).unwrap();
        let n = rv.len();
        let i = 2 + pick % (n - 1);
        let fam = conditional_family(&rv, i).unwrap();
        let min = min_law(&rv);
        for k in 1..20 {
            let u = k as f64 / 20.0;
            let t = invert_cdf(|x| order_stat_cdf(&rv, i, x).unwrap(), u, 0.0, 1.0).unwrap();
            let direct = order_stat_cdf(&rv, i, t).unwrap();
            let conv = order_stat_cdf_by_convolution(&rv, i, t).unwrap();
            prop_assert!((direct - conv).abs() <= 1e-8, "conv: {direct} vs {conv}");
            // Same integral through the conditional family H_x(t).
            let lam = min.rate();
            let quad = adaptive_simpson(&|x: f64| lam * (-lam * x).exp() * fam.cdf_at(x, t), 0.0, t, 1e-10);
            prop_assert!((direct - quad).abs() <= 1e-8, "family: {direct} vs {quad}");
        }
    }
}

#[test]
fn selftest_report_passes() {
    let r = selftest(6, 2024, 50).unwrap();
    assert_eq!(r.cases.len(), 50);
    assert!(
        r.passed,
        "spacing {:e}, marginal {:e}",
        r.spacing_max_diff, r.marginal_max_diff
    );
    assert!(r.cases.iter().all(|c| c.rates.len() <= 6));
}
