use serde::{Deserialize, Serialize};

use super::copula::{empirical_copula, DEFAULT_RESOLUTION};
use crate::dist::{ContinuousDist, SampleStream};
use crate::orders::{GridDesc, OrderVerdict, Witness};
use crate::{Error, Result};

const MIN_SAMPLES: usize = 10_000;

/// How the two parent pipelines draw their randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Both parents read stream `(seed, 0)`: common random numbers.
    Common,
    /// Parents read streams `(seed, 0)` and `(seed, 1)`.
    #[default]
    Independent,
}

/// `m` draws of `(Y_{1:n}, Y_{i:n})` from an i.i.d. sample of `parent`.
pub fn iid_min_pairs<D: ContinuousDist + ?Sized>(
    parent: &D,
    n: usize,
    i: usize,
    stream: &mut SampleStream,
    m: usize,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 || i < 2 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "min pair needs n >= 2 and 2 <= i <= n, got n = {n}, i = {i}"
        )));
    }
    let mut row = vec![0.0; n];
    Ok((0..m)
        .map(|_| {
            for x in row.iter_mut() {
                *x = parent.sample(stream);
            }
            row.sort_by(f64::total_cmp);
            (row[0], row[i - 1])
        })
        .collect())
}

/// Compares the empirical copulas of `(Y_{1:n}, Y_{i:n})` under two continuous
/// parents. Holds when the sup lattice distance is within the sum of the two
/// confidence radii.
pub fn copula_distribution_free_check<A, B>(
    n: usize,
    i: usize,
    parents: (&A, &B),
    m: usize,
    seed: u64,
    coupling: Coupling,
) -> Result<OrderVerdict>
where
    A: ContinuousDist + ?Sized,
    B: ContinuousDist + ?Sized,
{
    if m < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "distribution-free check needs m >= {MIN_SAMPLES}, got {m}"
        )));
    }
    let mut sa = SampleStream::new(seed, 0);
    let mut sb = match coupling {
        Coupling::Common => SampleStream::new(seed, 0),
        Coupling::Independent => SampleStream::new(seed, 1),
    };
    let pa = iid_min_pairs(parents.0, n, i, &mut sa, m)?;
    let pb = iid_min_pairs(parents.1, n, i, &mut sb, m)?;
    let ca = empirical_copula(&pa, DEFAULT_RESOLUTION)?;
    let cb = empirical_copula(&pb, DEFAULT_RESOLUTION)?;
    let (dist, u, v) = ca.sup_distance(&cb)?;
    Ok(OrderVerdict::from_excess(
        "copula_free",
        dist,
        Witness::Lattice { u, v },
        GridDesc::Lattice {
            resolution: DEFAULT_RESOLUTION,
        },
        ca.confidence_radius() + cb.confidence_radius(),
    ))
}
