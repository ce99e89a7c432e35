use super::RateVector;
use crate::dist::SampleStream;
use crate::{Error, Result};

fn draw_sorted(rv: &RateVector, stream: &mut SampleStream, row: &mut [f64]) {
    for (x, &rate) in row.iter_mut().zip(rv.rates()) {
        *x = -stream.uniform_open_low().ln() / rate;
    }
    row.sort_by(f64::total_cmp);
}

/// `m` draws of the full order-statistic vector `(X_{1:n}, …, X_{n:n})`.
pub fn sample_order_statistics(
    rv: &RateVector,
    stream: &mut SampleStream,
    m: usize,
) -> Vec<Vec<f64>> {
    let mut row = vec![0.0; rv.len()];
    (0..m)
        .map(|_| {
            draw_sorted(rv, stream, &mut row);
            row.clone()
        })
        .collect()
}

/// `m` draws of `X_{j:n} - X_{i:n}`.
pub fn sample_spacings(
    rv: &RateVector,
    i: usize,
    j: usize,
    stream: &mut SampleStream,
    m: usize,
) -> Result<Vec<f64>> {
    let n = rv.len();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::IndexOutOfRange(format!(
            "spacing indices must satisfy 1 <= i < j <= {n}, got ({i}, {j})"
        )));
    }
    let mut row = vec![0.0; n];
    Ok((0..m)
        .map(|_| {
            draw_sorted(rv, stream, &mut row);
            row[j - 1] - row[i - 1]
        })
        .collect())
}

/// `m` draws of the pair `(X_{1:n}, X_{i:n})`.
pub fn sample_min_pairs(
    rv: &RateVector,
    i: usize,
    stream: &mut SampleStream,
    m: usize,
) -> Result<Vec<(f64, f64)>> {
    let n = rv.len();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "order index {i} not in 1..={n}"
        )));
    }
    let mut row = vec![0.0; n];
    Ok((0..m)
        .map(|_| {
            draw_sorted(rv, stream, &mut row);
            (row[0], row[i - 1])
        })
        .collect())
}
