use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 50;
pub const MIN_COPULA_SAMPLE: usize = 100;

/// DKW-style uniform radius at significance 0.01: `sqrt(ln(2/0.01) / (2m))`.
pub fn confidence_radius(sample_size: usize) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * sample_size as f64)).sqrt()
}

/// Copula values on the lattice `{a / r : a = 1..=r}²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopulaGrid {
    resolution: usize,
    values: Vec<f64>,
    sample_size: Option<usize>,
    confidence_radius: f64,
}

impl CopulaGrid {
    /// Tabulates an exact copula; its confidence radius is zero.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(resolution: usize, c: F) -> Self {
        let pts = lattice(resolution);
        let values = pts
            .iter()
            .flat_map(|&u| pts.iter().map(move |&v| (u, v)))
            .map(|(u, v)| c(u, v))
            .collect();
        Self {
            resolution,
            values,
            sample_size: None,
            confidence_radius: 0.0,
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn sample_size(&self) -> Option<usize> {
        self.sample_size
    }

    pub fn confidence_radius(&self) -> f64 {
        self.confidence_radius
    }

    pub fn lattice(&self) -> Vec<f64> {
        lattice(self.resolution)
    }

    /// `C(u_a, v_b)` with zero-based lattice indices.
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.resolution + b]
    }

    /// Largest excursion outside the Fréchet bounds `max(u+v-1, 0) <= C <= min(u, v)`.
    pub fn frechet_excess(&self) -> f64 {
        let pts = self.lattice();
        let mut worst = 0.0f64;
        for (a, &u) in pts.iter().enumerate() {
            for (b, &v) in pts.iter().enumerate() {
                let c = self.value(a, b);
                worst = worst.max(c - u.min(v)).max((u + v - 1.0).max(0.0) - c);
            }
        }
        worst
    }

    /// `max_u |C(u, v_max) - u|` and the same for the other margin.
    pub fn margin_excess(&self) -> f64 {
        let pts = self.lattice();
        let last = self.resolution - 1;
        pts.iter()
            .enumerate()
            .map(|(a, &u)| {
                (self.value(a, last) - u)
                    .abs()
                    .max((self.value(last, a) - u).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `sup |C1 - C2|` over a shared lattice and the point attaining it.
    pub fn sup_distance(&self, other: &CopulaGrid) -> Result<(f64, f64, f64)> {
        if self.resolution != other.resolution {
            return Err(Error::InvalidInput(format!(
                "copula lattices differ: {} vs {}",
                self.resolution, other.resolution
            )));
        }
        let pts = self.lattice();
        let mut best = (f64::NEG_INFINITY, pts[0], pts[0]);
        for (a, &u) in pts.iter().enumerate() {
            for (b, &v) in pts.iter().enumerate() {
                let d = (self.value(a, b) - other.value(a, b)).abs();
                if d > best.0 {
                    best = (d, u, v);
                }
            }
        }
        Ok(best)
    }
}

fn lattice(resolution: usize) -> Vec<f64> {
    (1..=resolution)
        .map(|k| k as f64 / resolution as f64)
        .collect()
}

/// One-based ranks; ties are rejected because the copula of a continuous
/// pair is only identified from tie-free ranks.
pub(crate) fn strict_ranks(xs: &[f64], coordinate: &str) -> Result<Vec<usize>> {
    if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite value {bad} in {coordinate}"
        )));
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
    if let Some(w) = order.windows(2).find(|w| xs[w[0]] == xs[w[1]]) {
        return Err(Error::InvalidInput(format!(
            "tie at value {} in {coordinate}; continuous margins expected",
            xs[w[0]]
        )));
    }
    let mut ranks = vec![0; xs.len()];
    for (r, &k) in order.iter().enumerate() {
        ranks[k] = r + 1;
    }
    Ok(ranks)
}

/// Rank-based empirical copula
/// `C_m(u, v) = (1/m) #{k : R_k/m <= u, S_k/m <= v}` on the lattice
/// `{a / resolution}`.
pub fn empirical_copula(pairs: &[(f64, f64)], resolution: usize) -> Result<CopulaGrid> {
    let m = pairs.len();
    if m < MIN_COPULA_SAMPLE {
        return Err(Error::InvalidInput(format!(
            "empirical copula needs at least {MIN_COPULA_SAMPLE} pairs, got {m}"
        )));
    }
    if resolution == 0 {
        return Err(Error::InvalidInput(
            "copula resolution must be positive".into(),
        ));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let rx = strict_ranks(&xs, "first coordinate")?;
    let ry = strict_ranks(&ys, "second coordinate")?;

    // smallest lattice index a with R/m <= a/res, i.e. ceil(R * res / m)
    let cell = |r: usize| (r * resolution).div_ceil(m) - 1;
    let mut counts = vec![0u64; resolution * resolution];
    for (&r, &s) in rx.iter().zip(&ry) {
        counts[cell(r) * resolution + cell(s)] += 1;
    }
    for a in 0..resolution {
        for b in 0..resolution {
            let mut c = counts[a * resolution + b];
            if a > 0 {
                c += counts[(a - 1) * resolution + b];
            }
            if b > 0 {
                c += counts[a * resolution + b - 1];
            }
            if a > 0 && b > 0 {
                c -= counts[(a - 1) * resolution + b - 1];
            }
            counts[a * resolution + b] = c;
        }
    }
    Ok(CopulaGrid {
        resolution,
        values: counts.iter().map(|&c| c as f64 / m as f64).collect(),
        sample_size: Some(m),
        confidence_radius: confidence_radius(m),
    })
}
