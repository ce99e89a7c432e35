use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CheckKind, ExperimentConfig};
use super::report::{
    CheckResult, CorrOutcome, Outcome, PhrOutcome, Provenance, Report, TauOutcome, Timing,
};
use crate::dependence::{
    confidence_radius, copula_distribution_free_check, empirical_copula, empirical_tau,
    exact_tau_min_pair, pearson, sathe_check, CopulaGrid, Coupling,
};
use crate::dist::{ks_critical_1pct, SampleStream};
use crate::order_stats::{conditional_family, min_law, sample_min_pairs, spacing_law, RateVector};
use crate::orders::{check_disp, check_more_si, check_pqd, check_st, check_star, OrderVerdict};
use crate::phr::{phr_si_check, transformed_marginal_ks, PhrModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Task {
    pub check: CheckKind,
    pub i: Option<usize>,
    pub j: usize,
}

impl Task {
    pub fn label(&self) -> String {
        match self.i {
            Some(i) => format!("{}[{},{}]", self.check.name(), i, self.j),
            None => format!("{}[{}]", self.check.name(), self.j),
        }
    }

    /// Stream of this task; a pure function of the seed and the task itself.
    pub fn stream(&self, master_seed: u64) -> SampleStream {
        let kind = self.check as u64 + 1;
        let i = self.i.unwrap_or(0) as u64;
        SampleStream::new(master_seed, kind << 40 | i << 20 | self.j as u64)
    }
}

pub(crate) fn tasks(config: &ExperimentConfig) -> Vec<Task> {
    let mut out = Vec::new();
    for &check in &config.checks {
        if check.is_spacing_check() {
            for (i, j) in config.spacing_pairs() {
                out.push(Task {
                    check,
                    i: Some(i),
                    j,
                });
            }
        } else {
            for j in config.min_pair_indices() {
                out.push(Task { check, i: None, j });
            }
        }
    }
    out
}

/// Runs every requested check. Configuration problems are errors; numerical
/// trouble inside a check becomes an [`Outcome::Error`] for that check.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let rv = config.rate_vector()?;
    let seed = config.seed()?;
    let tasks = tasks(config);
    let timed: Vec<(Outcome, f64)> = tasks
        .par_iter()
        .map(|t| {
            let t0 = Instant::now();
            let outcome = run_task(config, &rv, seed, t).unwrap_or_else(|e| Outcome::Error {
                message: e.to_string(),
            });
            (outcome, t0.elapsed().as_secs_f64())
        })
        .collect();

    let mut results = Vec::with_capacity(tasks.len());
    let mut check_seconds = Vec::with_capacity(tasks.len());
    for (t, (outcome, secs)) in tasks.iter().zip(timed) {
        results.push(CheckResult {
            check: t.check,
            label: t.label(),
            i: t.i,
            j: t.j,
            holds: outcome.holds(),
            outcome,
        });
        check_seconds.push(secs);
    }
    let first_failure = results.iter().find(|r| !r.holds).map(|r| r.label.clone());
    Ok(Report {
        provenance: Provenance {
            crate_name: env!("CARGO_PKG_NAME").to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: seed,
            grid: config.grid_spec(),
            copula_resolution: config.copula_resolution,
            monte_carlo_m: config.monte_carlo_m,
            config: config.clone(),
        },
        all_hold: first_failure.is_none(),
        first_failure,
        results,
        timing: Timing {
            total_seconds: start.elapsed().as_secs_f64(),
            check_seconds,
        },
    })
}

fn finite(v: OrderVerdict) -> Result<OrderVerdict> {
    if v.max_violation.is_finite() {
        Ok(v)
    } else {
        Err(Error::Degenerate(format!(
            "{}: non-finite violation",
            v.order
        )))
    }
}

/// Empirical copulas of `(X_{1:n}, X_{j:n})` for `rv` and for its homogenization.
pub(crate) fn min_pair_copulas(
    config: &ExperimentConfig,
    rv: &RateVector,
    task: &Task,
) -> Result<(CopulaGrid, CopulaGrid)> {
    let mut stream = task.stream(config.seed()?);
    let mut homog_stream = stream.derive(stream.stream_index() | 1 << 62);
    let m = config.monte_carlo_m;
    let het = sample_min_pairs(rv, task.j, &mut stream, m)?;
    let hom = sample_min_pairs(&rv.homogenize(), task.j, &mut homog_stream, m)?;
    Ok((
        empirical_copula(&het, config.copula_resolution)?,
        empirical_copula(&hom, config.copula_resolution)?,
    ))
}

fn run_task(config: &ExperimentConfig, rv: &RateVector, seed: u64, task: &Task) -> Result<Outcome> {
    let grid = config.grid_spec();
    let tol = config.tolerance;
    let homog = rv.homogenize();
    let j = task.j;
    Ok(match task.check {
        CheckKind::St | CheckKind::Disp | CheckKind::Star => {
            let i = task.i.expect("spacing task carries i");
            let f = spacing_law(&homog, i, j)?;
            let g = spacing_law(rv, i, j)?;
            let v = match task.check {
                CheckKind::St => check_st(&f, &g, &grid, tol.exact)?,
                CheckKind::Disp => check_disp(&f, &g, &grid, tol.exact)?,
                _ => check_star(&f, &g, &grid, tol.exact)?,
            };
            Outcome::Verdict(finite(v)?)
        }
        CheckKind::Si => {
            let v = check_more_si(
                &conditional_family(rv, j)?,
                &min_law(rv),
                &conditional_family(&homog, j)?,
                &min_law(&homog),
                &grid,
                tol.si,
            )?;
            Outcome::Verdict(finite(v)?)
        }
        CheckKind::Pqd => {
            let (het, hom) = min_pair_copulas(config, rv, task)?;
            Outcome::Verdict(finite(check_pqd(&het, &hom)?)?)
        }
        CheckKind::Tau => {
            let mut stream = task.stream(seed);
            let mut homog_stream = stream.derive(stream.stream_index() | 1 << 62);
            let m = config.monte_carlo_m;
            let het = sample_min_pairs(rv, j, &mut stream, m)?;
            let hom = sample_min_pairs(&homog, j, &mut homog_stream, m)?;
            let exact = exact_tau_min_pair(rv.len(), j)?;
            let tau_het = empirical_tau(&het)?;
            let tau_hom = empirical_tau(&hom)?;
            let band = 2.0 * confidence_radius(m);
            Outcome::Tau(TauOutcome {
                j,
                exact_homogeneous: exact,
                empirical_homogeneous: tau_hom,
                empirical_heterogeneous: tau_het,
                band,
                holds: (tau_hom - exact).abs() <= band && tau_het <= exact + band,
            })
        }
        CheckKind::Corr => {
            let exact = sathe_check(rv, j)?;
            let mut stream = task.stream(seed);
            let mut homog_stream = stream.derive(stream.stream_index() | 1 << 62);
            let m = config.monte_carlo_m;
            let het = pearson(&sample_min_pairs(rv, j, &mut stream, m)?)?;
            let hom = pearson(&sample_min_pairs(&homog, j, &mut homog_stream, m)?)?;
            Outcome::Corr(CorrOutcome {
                exact,
                sampled_heterogeneous: het,
                sampled_homogeneous: hom,
                holds: exact.holds,
            })
        }
        CheckKind::Phr => {
            let baseline = config
                .baseline
                .ok_or_else(|| Error::InvalidInput("phr check needs a baseline".into()))?
                .build()?;
            let model = PhrModel::new(baseline, rv.clone())?;
            let mut stream = task.stream(seed);
            let check_seed = stream.next_u64();
            let verdict = phr_si_check(&model, j, &grid, tol.si, config.monte_carlo_m, check_seed)?;
            let marginal_ks = transformed_marginal_ks(&model, &mut stream, config.monte_carlo_m)?;
            let ks_critical = ks_critical_1pct(config.monte_carlo_m);
            let holds = verdict.holds && marginal_ks.iter().all(|&d| d <= ks_critical);
            Outcome::Phr(PhrOutcome {
                verdict,
                marginal_ks,
                ks_critical,
                holds,
            })
        }
        CheckKind::CopulaFree => {
            let [a, b] = config.copula_free_parents;
            let (a, b) = (a.build()?, b.build()?);
            let check_seed = task.stream(seed).next_u64();
            let v = copula_distribution_free_check(
                rv.len(),
                j,
                (&a, &b),
                config.monte_carlo_m,
                check_seed,
                Coupling::Independent,
            )?;
            Outcome::Verdict(finite(v)?)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub n: usize,
    pub i: usize,
    pub tau: f64,
}

/// Exact `τ(Y_{1:n}, Y_{i:n})` for one `i`, or for every `2 <= i <= n`.
pub fn tau_table(n: usize, i: Option<usize>) -> Result<Vec<TauRow>> {
    let idx: Vec<usize> = match i {
        Some(i) => vec![i],
        None if n >= 2 => (2..=n).collect(),
        None => return Err(Error::IndexOutOfRange(format!("need n >= 2, got {n}"))),
    };
    idx.into_iter()
        .map(|i| {
            Ok(TauRow {
                n,
                i,
                tau: exact_tau_min_pair(n, i)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json_str(json).unwrap()
    }

    #[test]
    fn disp_on_three_rates() {
        let r = run_experiment(&config(
            r#"{"rates":[1,2,3],"i":1,"j":3,"checks":["disp"],"master_seed":1}"#,
        ))
        .unwrap();
        assert_eq!(r.results.len(), 1);
        assert_eq!(r.results[0].label, "disp[1,3]");
        assert!(r.all_hold, "{:?}", r.results[0]);
    }

    #[test]
    fn equal_rates_give_zero_violation() {
        let r = run_experiment(&config(
            r#"{"rates":[1,1],"i":1,"j":2,"checks":["disp","star","st"],"master_seed":1}"#,
        ))
        .unwrap();
        assert!(r.all_hold);
        for res in &r.results {
            match &res.outcome {
                Outcome::Verdict(v) => assert_eq!(v.max_violation, 0.0, "{}", res.label),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn corr_reports_closed_forms() {
        let r = run_experiment(&config(
            r#"{"rates":[1,2],"j":2,"checks":["corr"],"master_seed":3,"monte_carlo_m":20000}"#,
        ))
        .unwrap();
        let Outcome::Corr(c) = &r.results[0].outcome else {
            panic!()
        };
        assert!((c.exact.heterogeneous - 2.0 / 33f64.sqrt()).abs() < 1e-12);
        assert!((c.exact.homogeneous - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        assert!(c.holds && r.all_hold);
    }

    #[test]
    fn tau_table_values() {
        let t = tau_table(3, None).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t[0].tau - 0.4).abs() < 1e-15);
        assert!((t[1].tau - 0.2).abs() < 1e-15);
        assert!(tau_table(3, Some(1)).is_err());
    }

    #[test]
    fn distinct_tasks_get_distinct_streams() {
        let c = config(r#"{"rates":[1,2,3],"checks":["pqd","tau"],"master_seed":9}"#);
        let ts = tasks(&c);
        let mut ids: Vec<u64> = ts.iter().map(|t| t.stream(9).stream_index()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), ts.len());
    }
}
