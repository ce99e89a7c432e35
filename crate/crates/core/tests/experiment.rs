use orderdep::experiment::{
    emit_curves, run_experiment, CheckKind, ExperimentConfig, Outcome, Report,
};

const FULL: &str = r#"
rates = [0.5, 1.0, 2.0, 8.0]
checks = ["st", "disp", "star", "si", "pqd", "tau", "corr", "phr", "copula-free"]
master_seed = 20241016
monte_carlo_m = 10000
si_grid = 10
baseline = { name = "weibull", shape = 2.0, scale = 1.5 }
"#;

#[test]
fn report_round_trips_losslessly() {
    let config = ExperimentConfig::from_toml_str(FULL).unwrap();
    let report = run_experiment(&config).unwrap();
    assert!(report.all_hold, "{:?}", report.first_failure);
    assert_eq!(report.provenance.config, config);
    let text = report.to_json().unwrap();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json().unwrap(), text);
    // 6 spacing pairs for each spacing check, 3 indices for the rest
    assert_eq!(report.results.len(), 3 * 6 + 6 * 3);
    assert_eq!(report.timing.check_seconds.len(), report.results.len());
}

#[test]
fn identical_configs_give_identical_reports() {
    let config = ExperimentConfig::from_toml_str(FULL).unwrap();
    let a = run_experiment(&config).unwrap().without_timing();
    let b = run_experiment(&config).unwrap().without_timing();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());

    let mut other = config.clone();
    other.master_seed = Some(1);
    let c = run_experiment(&other).unwrap().without_timing();
    assert_ne!(a.results, c.results);
}

#[test]
fn check_level_errors_do_not_abort_the_run() {
    let mut config = ExperimentConfig::from_toml_str(FULL).unwrap();
    config.monte_carlo_m = 500;
    config.checks = vec![CheckKind::Disp, CheckKind::CopulaFree];
    let r = run_experiment(&config).unwrap();
    assert!(!r.all_hold);
    assert_eq!(r.first_failure.as_deref(), Some("copula-free[2]"));
    assert!(r
        .results
        .iter()
        .filter(|x| x.check == CheckKind::Disp)
        .all(|x| x.holds));
    assert!(matches!(
        r.results.last().unwrap().outcome,
        Outcome::Error { .. }
    ));
}

#[test]
fn json_and_toml_configs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let toml_path = dir.path().join("c.toml");
    let json_path = dir.path().join("c.json");
    std::fs::write(
        &toml_path,
        "rates = [1.0, 2.0]\nj = 2\nchecks = [\"corr\"]\nmaster_seed = 4\n",
    )
    .unwrap();
    std::fs::write(
        &json_path,
        r#"{"rates": [1.0, 2.0], "j": 2, "checks": ["corr"], "master_seed": 4}"#,
    )
    .unwrap();
    assert_eq!(
        ExperimentConfig::load(&toml_path).unwrap(),
        ExperimentConfig::load(&json_path).unwrap()
    );
    assert!(ExperimentConfig::load(&dir.path().join("missing.toml")).is_err());
}

#[test]
fn curves_follow_the_requested_checks() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str(
        "rates = [1.0, 2.0, 3.0]\nchecks = [\"star\", \"tau\"]\nmaster_seed = 1\n",
    )
    .unwrap();
    let written = emit_curves(&config, dir.path()).unwrap();
    let names: Vec<String> = written
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        ["star_i1_j2.csv", "star_i1_j3.csv", "star_i2_j3.csv"]
    );
    let text = std::fs::read_to_string(&written[1]).unwrap();
    assert_eq!(text.lines().next(), Some("u,F_inv,G_inv,ratio"));
    assert_eq!(text.lines().count(), 200);

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    assert!(emit_curves(&config, &blocker.join("sub")).is_err());
}
