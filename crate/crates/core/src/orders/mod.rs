//! Grid-certified checkers for the usual stochastic, dispersive, star,
//! more-SI and PQD orders.
//!
//! Each checker first tabulates a curve (the same rows the CLI writes to
//! disk) and then reduces it to an [`OrderVerdict`]. The verdict always
//! carries the worst grid point, including when the order holds.

mod checks;
mod grid;
mod verdict;

pub use checks::{
    check_disp, check_more_si, check_pqd, check_st, check_star, disp_curve, pqd_curve, si_curve,
    st_curve, star_curve, DispRow, LatticeRow, SiRow, StRow, StarRow,
};
pub use grid::GridSpec;
pub use verdict::{GridDesc, OrderVerdict, Witness};

/// Default tolerance for checks on exact laws.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Default tolerance for the more-SI check on exact conditional families.
pub const SI_TOLERANCE: f64 = 1e-8;
