use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verdict::WorstPoint;
use super::{GridDesc, GridSpec, OrderVerdict, Witness};
use crate::dependence::CopulaGrid;
use crate::dist::ContinuousDist;
use crate::order_stats::ConditionalLaw;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StRow {
    pub x: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispRow {
    pub u: f64,
    pub f_inv: f64,
    pub g_inv: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarRow {
    pub u: f64,
    pub f_inv: f64,
    pub g_inv: f64,
    pub ratio: f64,
}

/// `lhs` is the composition for the candidate more-SI pair, `rhs` for the
/// reference pair; the order requires `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiRow {
    pub p: f64,
    pub q: f64,
    pub u: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeRow {
    pub u: f64,
    pub v: f64,
    pub c1: f64,
    pub c2: f64,
    pub diff: f64,
}

fn quantiles<D: ContinuousDist + ?Sized>(d: &D, us: &[f64]) -> Result<Vec<f64>> {
    us.iter().map(|&u| d.quantile(u)).collect()
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tolerance must be finite and >= 0, got {tolerance}"
        )))
    }
}

/// Both cdfs at the pooled grid quantiles of `F` and `G`, sorted by `x`.
pub fn st_curve<F, G>(f: &F, g: &G, grid: &GridSpec) -> Result<Vec<StRow>>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    grid.validate()?;
    let us = grid.u_points();
    let mut xs = quantiles(f, &us)?;
    xs.extend(quantiles(g, &us)?);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    Ok(xs
        .into_iter()
        .map(|x| StRow {
            x,
            f: f.cdf(x),
            g: g.cdf(x),
        })
        .collect())
}

/// `X ≤_st Y` where `F` is the law of `X`: requires `F >= G` on the pooled grid.
pub fn check_st<F, G>(f: &F, g: &G, grid: &GridSpec, tolerance: f64) -> Result<OrderVerdict>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    check_tolerance(tolerance)?;
    let mut worst = WorstPoint::new();
    for row in st_curve(f, g, grid)? {
        worst.offer(row.g - row.f, Witness::Point { x: row.x });
    }
    Ok(OrderVerdict::from_excess(
        "st",
        worst.excess,
        worst.witness.expect("grid is nonempty"),
        GridDesc::Quantile {
            u_resolution: grid.u_resolution,
        },
        tolerance,
    ))
}

pub fn disp_curve<F, G>(f: &F, g: &G, grid: &GridSpec) -> Result<Vec<DispRow>>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    grid.validate()?;
    grid.u_points()
        .into_iter()
        .map(|u| {
            let f_inv = f.quantile(u)?;
            let g_inv = g.quantile(u)?;
            Ok(DispRow {
                u,
                f_inv,
                g_inv,
                delta: g_inv - f_inv,
            })
        })
        .collect()
}

/// `F ≤_disp G`: `G^{-1}(u) - F^{-1}(u)` must be nondecreasing in `u`.
pub fn check_disp<F, G>(f: &F, g: &G, grid: &GridSpec, tolerance: f64) -> Result<OrderVerdict>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    check_tolerance(tolerance)?;
    let rows = disp_curve(f, g, grid)?;
    let mut worst = WorstPoint::new();
    for w in rows.windows(2) {
        worst.offer(
            w[0].delta - w[1].delta,
            Witness::Levels {
                u_lo: w[0].u,
                u_hi: w[1].u,
            },
        );
    }
    Ok(OrderVerdict::from_excess(
        "disp",
        worst.excess,
        worst.witness.expect("grid has at least two points"),
        GridDesc::Quantile {
            u_resolution: grid.u_resolution,
        },
        tolerance,
    ))
}

pub fn star_curve<F, G>(f: &F, g: &G, grid: &GridSpec) -> Result<Vec<StarRow>>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    grid.validate()?;
    grid.u_points()
        .into_iter()
        .map(|u| {
            let f_inv = f.quantile(u)?;
            let g_inv = g.quantile(u)?;
            if f_inv <= 0.0 || g_inv < 0.0 {
                return Err(Error::Degenerate(format!(
                    "star order needs positive quantiles, got F^-1({u}) = {f_inv}, G^-1({u}) = {g_inv}"
                )));
            }
            Ok(StarRow {
                u,
                f_inv,
                g_inv,
                ratio: g_inv / f_inv,
            })
        })
        .collect()
}

/// `F ≤_* G` for nonnegative laws: `G^{-1}(u) / F^{-1}(u)` nondecreasing in `u`,
/// the ratio form of `G^{-1}(F(x)) / x` increasing in `x`.
pub fn check_star<F, G>(f: &F, g: &G, grid: &GridSpec, tolerance: f64) -> Result<OrderVerdict>
where
    F: ContinuousDist + ?Sized,
    G: ContinuousDist + ?Sized,
{
    check_tolerance(tolerance)?;
    let rows = star_curve(f, g, grid)?;
    let mut worst = WorstPoint::new();
    for w in rows.windows(2) {
        worst.offer(
            w[0].ratio - w[1].ratio,
            Witness::Levels {
                u_lo: w[0].u,
                u_hi: w[1].u,
            },
        );
    }
    Ok(OrderVerdict::from_excess(
        "star",
        worst.excess,
        worst.witness.expect("grid has at least two points"),
        GridDesc::Quantile {
            u_resolution: grid.u_resolution,
        },
        tolerance,
    ))
}

/// Per pair: `H_{ξ_q} ∘ H_{ξ_p}^{-1}(u)` for every `(p, q, u)` in grid order.
fn si_compositions<H, M>(fam: &H, marg: &M, grid: &GridSpec) -> Result<Vec<f64>>
where
    H: ConditionalLaw + Sync + ?Sized,
    M: ContinuousDist + Sync + ?Sized,
{
    let ps = grid.pq_points();
    let us = grid.u_points();
    let xi: Vec<f64> = ps
        .iter()
        .map(|&p| marg.quantile(p))
        .collect::<Result<_>>()?;
    // H_{ξ_p}^{-1}(u), cached per (p, u)
    let inverses: Vec<Vec<f64>> = xi
        .par_iter()
        .map(|&x| {
            us.iter()
                .map(|&u| fam.conditional_quantile(x, u))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = (0..ps.len())
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::with_capacity((ps.len() - a - 1) * us.len());
            for &xq in &xi[a + 1..] {
                for &h_inv in &inverses[a] {
                    out.push(fam.conditional_cdf(xq, h_inv));
                }
            }
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Rows `(p, q, u, lhs, rhs)` with `lhs` from pair 2 and `rhs` from pair 1.
pub fn si_curve<H1, M1, H2, M2>(
    fam1: &H1,
    marg1: &M1,
    fam2: &H2,
    marg2: &M2,
    grid: &GridSpec,
) -> Result<Vec<SiRow>>
where
    H1: ConditionalLaw + Sync + ?Sized,
    M1: ContinuousDist + Sync + ?Sized,
    H2: ConditionalLaw + Sync + ?Sized,
    M2: ContinuousDist + Sync + ?Sized,
{
    grid.validate()?;
    let rhs = si_compositions(fam1, marg1, grid)?;
    let lhs = si_compositions(fam2, marg2, grid)?;
    let us = grid.u_points();
    let mut rows = Vec::with_capacity(lhs.len());
    let mut k = 0;
    for (p, q) in grid.pq_pairs() {
        for &u in &us {
            rows.push(SiRow {
                p,
                q,
                u,
                lhs: lhs[k],
                rhs: rhs[k],
            });
            k += 1;
        }
    }
    Ok(rows)
}

/// Pair 2 is more stochastically increasing than pair 1: for all grid
/// `p < q` and `u`,
/// `H_{2,ξ_{2q}} ∘ H_{2,ξ_{2p}}^{-1}(u) <= H_{1,ξ_{1q}} ∘ H_{1,ξ_{1p}}^{-1}(u)`,
/// where `ξ_{kp}` is the `p`-quantile of the conditioning marginal of pair `k`.
pub fn check_more_si<H1, M1, H2, M2>(
    fam1: &H1,
    marg1: &M1,
    fam2: &H2,
    marg2: &M2,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<OrderVerdict>
where
    H1: ConditionalLaw + Sync + ?Sized,
    M1: ContinuousDist + Sync + ?Sized,
    H2: ConditionalLaw + Sync + ?Sized,
    M2: ContinuousDist + Sync + ?Sized,
{
    check_tolerance(tolerance)?;
    let mut worst = WorstPoint::new();
    for row in si_curve(fam1, marg1, fam2, marg2, grid)? {
        worst.offer(
            row.lhs - row.rhs,
            Witness::Si {
                p: row.p,
                q: row.q,
                u: row.u,
            },
        );
    }
    Ok(OrderVerdict::from_excess(
        "si",
        worst.excess,
        worst.witness.expect("grid is nonempty"),
        GridDesc::Si {
            u_resolution: grid.u_resolution,
            pq_resolution: grid.pq_resolution,
        },
        tolerance,
    ))
}

pub fn pqd_curve(c1: &CopulaGrid, c2: &CopulaGrid) -> Result<Vec<LatticeRow>> {
    if c1.resolution() != c2.resolution() {
        return Err(Error::InvalidInput(format!(
            "copula lattices differ: {} vs {}",
            c1.resolution(),
            c2.resolution()
        )));
    }
    let pts = c1.lattice();
    let mut rows = Vec::with_capacity(pts.len() * pts.len());
    for (a, &u) in pts.iter().enumerate() {
        for (b, &v) in pts.iter().enumerate() {
            let (x, y) = (c1.value(a, b), c2.value(a, b));
            rows.push(LatticeRow {
                u,
                v,
                c1: x,
                c2: y,
                diff: x - y,
            });
        }
    }
    Ok(rows)
}

/// `C1 ≺_PQD C2`: `C1 <= C2` on the shared lattice, up to the sum of the
/// two estimates' confidence radii.
pub fn check_pqd(c1: &CopulaGrid, c2: &CopulaGrid) -> Result<OrderVerdict> {
    let mut worst = WorstPoint::new();
    for row in pqd_curve(c1, c2)? {
        worst.offer(row.diff, Witness::Lattice { u: row.u, v: row.v });
    }
    Ok(OrderVerdict::from_excess(
        "pqd",
        worst.excess,
        worst.witness.expect("lattice is nonempty"),
        GridDesc::Lattice {
            resolution: c1.resolution(),
        },
        c1.confidence_radius() + c2.confidence_radius(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Exponential, Uniform};
    use crate::order_stats::{ConditionalFamily, IndependentFamily};

    fn exp(rate: f64) -> Exponential {
        Exponential::new(rate).unwrap()
    }

    #[test]
    fn scale_family_orders() {
        let g = GridSpec::default();
        let (f, gg) = (exp(2.0), exp(1.0));
        assert!(check_st(&f, &gg, &g, 1e-9).unwrap().holds);
        assert!(!check_st(&gg, &f, &g, 1e-9).unwrap().holds);
        assert!(check_disp(&f, &gg, &g, 1e-9).unwrap().holds);
        assert!(!check_disp(&gg, &f, &g, 1e-9).unwrap().holds);
        let star = check_star(&f, &gg, &g, 1e-9).unwrap();
        assert!(star.holds);
        for row in star_curve(&f, &gg, &g).unwrap() {
            assert!((row.ratio - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reflexive() {
        let g = GridSpec::default();
        let f = exp(3.0);
        for v in [
            check_st(&f, &f, &g, 1e-9).unwrap(),
            check_disp(&f, &f, &g, 1e-9).unwrap(),
            check_star(&f, &f, &g, 1e-9).unwrap(),
        ] {
            assert!(v.holds);
            assert_eq!(v.max_violation, 0.0);
        }
    }

    #[test]
    fn verdict_invariant_and_determinism() {
        let g = GridSpec::default();
        let a = check_disp(&exp(1.0), &exp(2.0), &g, 1e-9).unwrap();
        let b = check_disp(&exp(1.0), &exp(2.0), &g, 1e-9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.holds, a.max_violation <= a.tolerance);
        match a.witness {
            Witness::Levels { u_lo, u_hi } => {
                let us = g.u_points();
                assert!(us.contains(&u_lo) && us.contains(&u_hi));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn star_rejects_zero_quantile() {
        let f = Uniform::new(0.0, 1.0).unwrap();
        let point_mass_low = crate::dist::ecdf(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        let err = check_star(&point_mass_low, &f, &GridSpec::default(), 1e-9);
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn independent_reference_accepts_si_pair() {
        let g = GridSpec::default();
        let marg = exp(1.0);
        let indep = IndependentFamily::new(exp(1.0));
        let shift = ConditionalFamily::new(exp(2.0));
        let v = check_more_si(&indep, &marg, &shift, &marg, &g, 1e-8).unwrap();
        assert!(v.holds, "{v:?}");
        for row in si_curve(&indep, &marg, &indep, &marg, &g).unwrap() {
            assert!((row.rhs - row.u).abs() < 1e-12);
        }
        // and the converse fails
        let v = check_more_si(&shift, &marg, &indep, &marg, &g, 1e-8).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn more_si_reflexive() {
        let g = GridSpec::default();
        let marg = exp(6.0);
        let fam = ConditionalFamily::new(exp(1.5));
        let v = check_more_si(&fam, &marg, &fam, &marg, &g, 1e-8).unwrap();
        assert!(v.holds);
        assert_eq!(v.max_violation, 0.0);
    }

    #[test]
    fn invalid_tolerance() {
        let g = GridSpec::default();
        assert!(check_disp(&exp(1.0), &exp(1.0), &g, -1.0).is_err());
        assert!(check_st(&exp(1.0), &exp(1.0), &g, f64::NAN).is_err());
    }

    #[test]
    fn pqd_trivial_cases() {
        let indep = CopulaGrid::from_fn(50, |u, v| u * v);
        let comon = CopulaGrid::from_fn(50, f64::min);
        assert!(check_pqd(&indep, &comon).unwrap().holds);
        assert!(!check_pqd(&comon, &indep).unwrap().holds);
        let same = check_pqd(&indep, &indep).unwrap();
        assert!(same.holds && same.max_violation == 0.0);
        let coarse = CopulaGrid::from_fn(10, |u, v| u * v);
        assert!(check_pqd(&indep, &coarse).is_err());
    }
}
