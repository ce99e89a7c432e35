use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use orderdep::experiment::{emit_curves, run_experiment, tau_table, ExperimentConfig};
use orderdep::oracle::selftest;

/// Verification harness for order statistics of heterogeneous exponentials.
#[derive(Parser, Debug)]
#[command(name = "orderdep", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// u-grid resolution: points k/GRID for k = 1..GRID-1.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Monte Carlo sample size.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Master seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance applied to both exact and SI checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the checks of a config file and print the JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write CSV curve tables for the checks of a config file.
    Curves {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact Kendall tau of (Y_{1:n}, Y_{i:n}) for an i.i.d. sample.
    Tau {
        #[arg(long)]
        n: usize,
        /// Single index; all of 2..=n when omitted.
        #[arg(long)]
        i: Option<usize>,
    },
    /// Compare the exact spacing and marginal laws with brute-force oracles.
    Selftest {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 50)]
        vectors: usize,
    },
}

/// A failed check (exit 1) as opposed to bad input (exit 2).
struct CheckFailed(String);

fn load_config(path: &Path, g: &GlobalOpts) -> anyhow::Result<ExperimentConfig> {
    let mut c =
        ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(k) = g.grid {
        c.grid = k;
    }
    if let Some(m) = g.samples {
        c.monte_carlo_m = m;
    }
    if let Some(s) = g.seed {
        c.master_seed = Some(s);
    }
    if let Some(t) = g.tolerance {
        c.tolerance.exact = t;
        c.tolerance.si = t;
    }
    c.validate()?;
    Ok(c)
}

/// `v` rounded to 15 significant digits, in positional notation where sensible.
fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.14}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp).max(0) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}

fn run(cli: Cli) -> anyhow::Result<Result<(), CheckFailed>> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { config, out } => {
            let c = load_config(config, g)?;
            let report = run_experiment(&c)?;
            let text = report.to_json()?;
            match out {
                Some(p) => std::fs::write(p, text + "\n")
                    .with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            for r in &report.results {
                eprintln!("{} {}", if r.holds { "PASS" } else { "FAIL" }, r.label);
            }
            if let Some(label) = report.first_failure {
                return Ok(Err(CheckFailed(format!("check failed: {label}"))));
            }
        }
        Command::Curves { config, out } => {
            let c = load_config(config, g)?;
            for p in emit_curves(&c, out)? {
                println!("{}", p.display());
            }
        }
        Command::Tau { n, i } => {
            let rows = tau_table(*n, *i)?;
            println!("n,i,tau");
            for row in rows {
                println!("{},{},{}", row.n, row.i, sig15(row.tau));
            }
        }
        Command::Selftest { max_n, vectors } => {
            let seed = g.seed.context("selftest needs --seed")?;
            let report = selftest(*max_n, seed, *vectors)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            eprintln!(
                "spacing max diff {:e} (tol {:e}), marginal max diff {:e} (tol {:e})",
                report.spacing_max_diff,
                report.spacing_tolerance,
                report.marginal_max_diff,
                report.marginal_tolerance
            );
            if !report.passed {
                return Ok(Err(CheckFailed("selftest failed".into())));
            }
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CheckFailed(msg))) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
