use std::collections::HashMap;

use super::RateVector;
use crate::dist::{ContinuousDist, Dist, FiniteMixture, Hypoexponential, SampleStream};
use crate::{Error, Result};

/// Largest sample size handled by the exact subset recursion.
pub const MAX_EXACT_N: usize = 16;
const MAX_COMPONENTS: usize = 2_000_000;

/// Exact law of the generalized spacing `X_{j:n} - X_{i:n}`.
///
/// After `k` failures the set of surviving components is `T_k`, and the
/// holding time before the next failure is exponential with rate `Λ(T_k)`.
/// Conditional on the chain `T_i ⊃ T_{i+1} ⊃ … ⊃ T_{j-1}` the spacing is
/// hypoexponential with stages `Λ(T_i), …, Λ(T_{j-1})`; unconditionally it is
/// the mixture of these over all chains. Chains with bit-identical stage
/// vectors are merged, so a homogeneous sample yields one component.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingMixture {
    i: usize,
    j: usize,
    mixture: FiniteMixture,
}

impl SpacingMixture {
    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn mixture(&self) -> &FiniteMixture {
        &self.mixture
    }

    /// `(weight, stages)` per component in deterministic chain order.
    pub fn chains(&self) -> impl Iterator<Item = (f64, &Hypoexponential)> + '_ {
        self.mixture.components().iter().map(|(w, d)| match d {
            Dist::Hypoexponential(h) => (*w, h),
            _ => unreachable!("spacing components are hypoexponential"),
        })
    }

    pub fn to_dist(&self) -> Dist {
        Dist::Mixture(self.mixture.clone())
    }
}

impl ContinuousDist for SpacingMixture {
    fn cdf(&self, x: f64) -> f64 {
        self.mixture.cdf(x)
    }
    fn survival(&self, x: f64) -> f64 {
        self.mixture.survival(x)
    }
    fn mean(&self) -> f64 {
        self.mixture.mean()
    }
    fn variance(&self) -> f64 {
        self.mixture.variance()
    }
    fn sample(&self, stream: &mut SampleStream) -> f64 {
        self.mixture.sample(stream)
    }
}

/// Exact mixture law of `X_{j:n} - X_{i:n}`, `1 <= i < j <= n`.
pub fn spacing_law(rv: &RateVector, i: usize, j: usize) -> Result<SpacingMixture> {
    let n = rv.len();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::IndexOutOfRange(format!(
            "spacing indices must satisfy 1 <= i < j <= {n}, got ({i}, {j})"
        )));
    }
    if n > MAX_EXACT_N {
        return Err(Error::TooLarge(format!(
            "exact spacing laws support n <= {MAX_EXACT_N}, got {n}"
        )));
    }
    let rates = rv.rates();
    let full = (1usize << n) - 1;

    // Λ(T), summed in ascending index order
    let mut total = vec![0.0f64; 1 << n];
    for mask in 1..=full {
        let high = usize::BITS - 1 - mask.leading_zeros();
        total[mask] = total[mask & !(1 << high)] + rates[high as usize];
    }

    // p(T) = P(surviving set after n - |T| failures is T)
    let min_alive = n - i;
    let mut reach = vec![0.0f64; 1 << n];
    reach[full] = 1.0;
    for mask in (0..full).rev() {
        if (mask.count_ones() as usize) < min_alive {
            continue;
        }
        let mut p = 0.0;
        for (x, &rate) in rates.iter().enumerate() {
            if mask & (1 << x) == 0 {
                let parent = mask | (1 << x);
                p += reach[parent] * rate / total[parent];
            }
        }
        reach[mask] = p;
    }

    let depth = j - i;
    let mut merged: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut stages = Vec::with_capacity(depth);
    let mut visited = 0usize;
    for (start, &start_weight) in reach.iter().enumerate() {
        if start.count_ones() as usize != min_alive || start_weight == 0.0 {
            continue;
        }
        let mut emit = |weight: f64, stages: &[f64]| -> Result<()> {
            visited += 1;
            if visited > MAX_COMPONENTS {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_COMPONENTS} surviving-set chains"
                )));
            }
            let key: Vec<u64> = stages.iter().map(|s| s.to_bits()).collect();
            match index.get(&key) {
                Some(&k) => merged[k].0 += weight,
                None => {
                    index.insert(key, merged.len());
                    merged.push((weight, stages.to_vec()));
                }
            }
            Ok(())
        };
        walk_chains(
            start,
            start_weight,
            depth,
            rates,
            &total,
            &mut stages,
            &mut emit,
        )?;
    }

    let components = merged
        .into_iter()
        .map(|(w, s)| Ok((w, Dist::Hypoexponential(Hypoexponential::new(&s)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpacingMixture {
        i,
        j,
        mixture: FiniteMixture::new(components)?,
    })
}

fn walk_chains<F>(
    alive: usize,
    weight: f64,
    depth: usize,
    rates: &[f64],
    total: &[f64],
    stages: &mut Vec<f64>,
    emit: &mut F,
) -> Result<()>
where
    F: FnMut(f64, &[f64]) -> Result<()>,
{
    stages.push(total[alive]);
    if stages.len() == depth {
        emit(weight, stages)?;
    } else {
        for x in 0..rates.len() {
            if alive & (1 << x) != 0 {
                let next = weight * rates[x] / total[alive];
                walk_chains(alive & !(1 << x), next, depth, rates, total, stages, emit)?;
            }
        }
    }
    stages.pop();
    Ok(())
}
