use serde::{Deserialize, Serialize};

use crate::dist::unit_grid;
use crate::{Error, Result};

/// Evaluation lattice: `u_k = k / u_resolution` for the quantile checks and
/// `p, q ∈ { k / pq_resolution }` (with `p < q`) for the more-SI check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_resolution: usize,
    pub pq_resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            u_resolution: 200,
            pq_resolution: 20,
        }
    }
}

impl GridSpec {
    pub fn new(u_resolution: usize, pq_resolution: usize) -> Result<Self> {
        let g = Self {
            u_resolution,
            pq_resolution,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.u_resolution < 2 || self.pq_resolution < 3 {
            return Err(Error::InvalidInput(format!(
                "grid needs u_resolution >= 2 and pq_resolution >= 3, got {} and {}",
                self.u_resolution, self.pq_resolution
            )));
        }
        Ok(())
    }

    pub fn u_points(&self) -> Vec<f64> {
        unit_grid(self.u_resolution)
    }

    pub fn pq_points(&self) -> Vec<f64> {
        unit_grid(self.pq_resolution)
    }

    /// All `(p, q)` pairs with `p < q`, in row-major order.
    pub fn pq_pairs(&self) -> Vec<(f64, f64)> {
        let pts = self.pq_points();
        let mut out = Vec::new();
        for (a, &p) in pts.iter().enumerate() {
            for &q in &pts[a + 1..] {
                out.push((p, q));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sizes() {
        let g = GridSpec::default();
        let u = g.u_points();
        assert_eq!(u.len(), 199);
        assert_eq!(u[0], 0.005);
        assert_eq!(u[198], 0.995);
        assert_eq!(g.pq_points().len(), 19);
        assert_eq!(g.pq_pairs().len(), 19 * 18 / 2);
        assert!(g
            .pq_pairs()
            .iter()
            .all(|(p, q)| p < q && *p > 0.0 && *q < 1.0));
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(GridSpec::new(1, 20).is_err());
        assert!(GridSpec::new(200, 2).is_err());
    }
}
