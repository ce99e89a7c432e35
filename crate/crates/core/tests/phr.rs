use orderdep::dependence::{empirical_copula, DEFAULT_RESOLUTION};
use orderdep::dist::{ks_critical_1pct, ks_distance, Exponential, SampleStream, Uniform, Weibull};
use orderdep::order_stats::{conditional_family, min_law, RateVector};
use orderdep::orders::{check_more_si, GridSpec, SI_TOLERANCE};
use orderdep::phr::{phr_sample, phr_si_check, phr_transform, transformed_marginal_ks, PhrModel};

fn rates() -> RateVector {
    RateVector::new(vec![1.0, 2.0, 3.0]).unwrap()
}

#[test]
fn exponential_baseline_reduces_to_the_direct_pipeline() {
    let grid = GridSpec::default();
    let rv = rates();
    let h = rv.homogenize();
    for i in 2..=3 {
        let direct = check_more_si(
            &conditional_family(&rv, i).unwrap(),
            &min_law(&rv),
            &conditional_family(&h, i).unwrap(),
            &min_law(&h),
            &grid,
            SI_TOLERANCE,
        )
        .unwrap();
        let model = PhrModel::new(Exponential::new(1.0).unwrap(), rv.clone()).unwrap();
        let v = phr_si_check(&model, i, &grid, SI_TOLERANCE, 5_000, 17).unwrap();
        assert_eq!(v.si, direct);
        assert!(v.holds);

        // The verdict does not depend on which baseline was reduced.
        let weibull = PhrModel::new(Weibull::new(2.0, 1.0).unwrap(), rv.clone()).unwrap();
        let w = phr_si_check(&weibull, i, &grid, SI_TOLERANCE, 5_000, 17).unwrap();
        assert_eq!(w.si, direct);
    }
}

#[test]
fn transform_leaves_the_copula_unchanged() {
    let model = PhrModel::new(Weibull::new(0.7, 3.0).unwrap(), rates()).unwrap();
    let rows = phr_sample(&model, &mut SampleStream::new(4, 0), 20_000).unwrap();
    for i in 2..=3 {
        let mut raw = Vec::new();
        let mut moved = Vec::new();
        for row in &rows {
            let mut a = row.clone();
            a.sort_by(f64::total_cmp);
            raw.push((a[0], a[i - 1]));
            let mut b: Vec<f64> = row
                .iter()
                .map(|&x| phr_transform(&model, x).unwrap())
                .collect();
            b.sort_by(f64::total_cmp);
            moved.push((b[0], b[i - 1]));
        }
        assert_eq!(
            empirical_copula(&raw, DEFAULT_RESOLUTION).unwrap(),
            empirical_copula(&moved, DEFAULT_RESOLUTION).unwrap()
        );
        let v = phr_si_check(&model, i, &GridSpec::default(), SI_TOLERANCE, 20_000, 4).unwrap();
        assert_eq!(v.copula_invariance.max_violation, 0.0);
    }
}

#[test]
fn components_follow_powered_baseline_survival() {
    let m = 100_000;
    let model = PhrModel::new(Weibull::new(2.0, 1.0).unwrap(), rates()).unwrap();
    let rows = phr_sample(&model, &mut SampleStream::new(12, 0), m).unwrap();
    for k in 0..3 {
        let xs: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let d = ks_distance(&xs, |x| 1.0 - model.component_survival(k, x));
        assert!(d < ks_critical_1pct(m), "component {k}: D = {d}");
    }
}

#[test]
fn transformed_marginals_are_exponential() {
    let m = 100_000;
    for (seed, base) in [
        (1, Weibull::new(2.0, 1.0).unwrap()),
        (2, Weibull::new(0.6, 4.0).unwrap()),
    ] {
        let model = PhrModel::new(base, rates()).unwrap();
        let ks = transformed_marginal_ks(&model, &mut SampleStream::new(seed, 0), m).unwrap();
        assert_eq!(ks.len(), 3);
        assert!(ks.iter().all(|&d| d < ks_critical_1pct(m)), "{ks:?}");
    }
}

#[test]
fn invalid_models_and_inputs() {
    assert!(PhrModel::new(Uniform::new(0.0, 1.0).unwrap(), rates()).is_err());
    let model = PhrModel::new(Exponential::new(2.0).unwrap(), rates()).unwrap();
    assert!(phr_transform(&model, -1.0).is_err());
    assert!(phr_transform(&model, f64::NAN).is_err());
    assert_eq!(phr_transform(&model, 1.5).unwrap(), 3.0);
    assert!(phr_si_check(&model, 1, &GridSpec::default(), SI_TOLERANCE, 1000, 0).is_err());
}
