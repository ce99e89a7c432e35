use std::path::{Path, PathBuf};

use super::config::{CheckKind, ExperimentConfig};
use super::run::{min_pair_copulas, tasks};
use crate::order_stats::{conditional_family, min_law, spacing_law};
use crate::orders::{disp_curve, pqd_curve, si_curve, st_curve, star_curve};
use crate::{Error, Result};

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let err = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string))
            .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes one CSV table per curve-producing check (st, disp, star, si, pqd)
/// into `out_dir` and returns the paths written. Other checks are skipped.
pub fn emit_curves(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let rv = config.rate_vector()?;
    let homog = rv.homogenize();
    let grid = config.grid_spec();
    let mut written = Vec::new();
    for task in tasks(config) {
        let j = task.j;
        let (name, header, rows): (String, &[&str], Vec<Vec<f64>>) = match task.check {
            CheckKind::St | CheckKind::Disp | CheckKind::Star => {
                let i = task.i.expect("spacing task carries i");
                let f = spacing_law(&homog, i, j)?;
                let g = spacing_law(&rv, i, j)?;
                let stem = format!("{}_i{i}_j{j}.csv", task.check.name());
                match task.check {
                    CheckKind::St => (
                        stem,
                        &["x", "F", "G"],
                        st_curve(&f, &g, &grid)?
                            .into_iter()
                            .map(|r| vec![r.x, r.f, r.g])
                            .collect(),
                    ),
                    CheckKind::Disp => (
                        stem,
                        &["u", "F_inv", "G_inv", "delta"],
                        disp_curve(&f, &g, &grid)?
                            .into_iter()
                            .map(|r| vec![r.u, r.f_inv, r.g_inv, r.delta])
                            .collect(),
                    ),
                    _ => (
                        stem,
                        &["u", "F_inv", "G_inv", "ratio"],
                        star_curve(&f, &g, &grid)?
                            .into_iter()
                            .map(|r| vec![r.u, r.f_inv, r.g_inv, r.ratio])
                            .collect(),
                    ),
                }
            }
            CheckKind::Si => (
                format!("si_i{j}.csv"),
                &["p", "q", "u", "lhs", "rhs"],
                si_curve(
                    &conditional_family(&rv, j)?,
                    &min_law(&rv),
                    &conditional_family(&homog, j)?,
                    &min_law(&homog),
                    &grid,
                )?
                .into_iter()
                .map(|r| vec![r.p, r.q, r.u, r.lhs, r.rhs])
                .collect(),
            ),
            CheckKind::Pqd => {
                let (het, hom) = min_pair_copulas(config, &rv, &task)?;
                (
                    format!("pqd_i{j}.csv"),
                    &["u", "v", "c1", "c2", "diff"],
                    pqd_curve(&het, &hom)?
                        .into_iter()
                        .map(|r| vec![r.u, r.v, r.c1, r.c2, r.diff])
                        .collect(),
                )
            }
            _ => continue,
        };
        let path = out_dir.join(name);
        write_csv(&path, header, rows.into_iter())?;
        written.push(path);
    }
    Ok(written)
}
