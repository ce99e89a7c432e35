use serde::{Deserialize, Serialize};

/// Grid point attaining the reported violation (or the smallest slack).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Pooled quantile point `x`.
    Point {
        x: f64,
    },
    /// Consecutive quantile levels.
    Levels {
        u_lo: f64,
        u_hi: f64,
    },
    Si {
        p: f64,
        q: f64,
        u: f64,
    },
    Lattice {
        u: f64,
        v: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridDesc {
    Quantile {
        u_resolution: usize,
    },
    Si {
        u_resolution: usize,
        pq_resolution: usize,
    },
    Lattice {
        resolution: usize,
    },
}

/// Outcome of an order check on a finite grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub order: String,
    pub holds: bool,
    pub max_violation: f64,
    pub witness: Witness,
    pub grid: GridDesc,
    pub tolerance: f64,
}

impl OrderVerdict {
    /// Builds a verdict from the largest signed excess found on the grid;
    /// the reported violation is its positive part.
    pub fn from_excess(
        order: &str,
        worst_excess: f64,
        witness: Witness,
        grid: GridDesc,
        tolerance: f64,
    ) -> Self {
        let max_violation = worst_excess.max(0.0);
        Self {
            order: order.to_string(),
            holds: max_violation <= tolerance,
            max_violation,
            witness,
            grid,
            tolerance,
        }
    }
}

/// Running max with ties resolved to the first index seen.
pub(crate) struct WorstPoint {
    pub excess: f64,
    pub witness: Option<Witness>,
}

impl WorstPoint {
    pub fn new() -> Self {
        Self {
            excess: f64::NEG_INFINITY,
            witness: None,
        }
    }

    pub fn offer(&mut self, excess: f64, witness: Witness) {
        let excess = if excess.is_nan() {
            f64::INFINITY
        } else {
            excess
        };
        if self.witness.is_none() || excess > self.excess {
            self.excess = excess;
            self.witness = Some(witness);
        }
    }
}
