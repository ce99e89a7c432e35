use super::{spacing_law, RateVector};
use crate::dist::{ContinuousDist, Dist};
use crate::{Error, Result};

/// Conditional laws `H_x` of a response given the conditioning variable `= x`.
pub trait ConditionalLaw {
    /// `H_x(t)`.
    fn conditional_cdf(&self, x: f64, t: f64) -> f64;

    /// `H_x^{-1}(u)`.
    fn conditional_quantile(&self, x: f64, u: f64) -> Result<f64>;
}

/// `x ↦ law of (x + S)` for a fixed law `S` independent of the conditioning
/// variable: the conditional structure of `X_{i:n}` given `X_{1:n}`, and of any
/// independent sum `X + Y` given `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalFamily {
    base: Dist,
}

impl ConditionalFamily {
    pub fn new(base: impl Into<Dist>) -> Self {
        Self { base: base.into() }
    }

    /// The law at `x = 0`.
    pub fn base(&self) -> &Dist {
        &self.base
    }

    /// `family_x(t)`.
    pub fn cdf_at(&self, x: f64, t: f64) -> f64 {
        self.base.cdf(t - x)
    }
}

impl ConditionalLaw for ConditionalFamily {
    fn conditional_cdf(&self, x: f64, t: f64) -> f64 {
        self.cdf_at(x, t)
    }

    fn conditional_quantile(&self, x: f64, u: f64) -> Result<f64> {
        Ok(x + self.base.quantile(u)?)
    }
}

/// Conditional law that ignores the conditioning value (independent pair).
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentFamily {
    law: Dist,
}

impl IndependentFamily {
    pub fn new(law: impl Into<Dist>) -> Self {
        Self { law: law.into() }
    }
}

impl ConditionalLaw for IndependentFamily {
    fn conditional_cdf(&self, _x: f64, t: f64) -> f64 {
        self.law.cdf(t)
    }

    fn conditional_quantile(&self, _x: f64, u: f64) -> Result<f64> {
        self.law.quantile(u)
    }
}

/// Conditional family of `X_{i:n}` given `X_{1:n}`: the shift of the spacing
/// law of `X_{i:n} - X_{1:n}`, which is independent of the minimum.
pub fn conditional_family(rv: &RateVector, i: usize) -> Result<ConditionalFamily> {
    if i < 2 || i > rv.len() {
        return Err(Error::IndexOutOfRange(format!(
            "conditioning on the minimum needs 2 <= i <= {}, got {i}",
            rv.len()
        )));
    }
    Ok(ConditionalFamily::new(spacing_law(rv, 1, i)?.to_dist()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shift_is_spacing_law() {
        let rv = RateVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let fam = conditional_family(&rv, 3).unwrap();
        let sp = spacing_law(&rv, 1, 3).unwrap();
        for &t in &[0.1, 0.5, 1.0, 4.0] {
            assert_eq!(fam.cdf_at(0.0, t), sp.cdf(t));
        }
    }

    #[test]
    fn shift_structure() {
        let rv = RateVector::new(vec![0.5, 1.0, 2.0, 8.0]).unwrap();
        let fam = conditional_family(&rv, 2).unwrap();
        for &x in &[0.0, 0.2, 1.3] {
            for &t in &[0.0, 0.4, 1.0, 3.0] {
                assert_eq!(fam.cdf_at(x, t), fam.cdf_at(0.0, t - x));
            }
            let q = fam.conditional_quantile(x, 0.3).unwrap();
            assert!((fam.conditional_cdf(x, q) - 0.3).abs() < 1e-10);
        }
    }

    #[test]
    fn minimum_itself_is_rejected() {
        let rv = RateVector::new(vec![1.0, 2.0]).unwrap();
        assert!(conditional_family(&rv, 1).is_err());
        assert!(conditional_family(&rv, 3).is_err());
    }
}
