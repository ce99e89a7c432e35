//! Exact and simulated laws of order statistics from independent exponential
//! samples with heterogeneous hazard rates, together with executable checkers
//! for the usual stochastic, dispersive, star, more-SI and PQD orders.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |---|---|
//! | [`dist`] | exponential, hypoexponential, mixture and empirical laws; quantile inversion; seeded sample streams |
//! | [`order_stats`] | rate vectors, exact spacing laws, conditional families, exact correlations |
//! | [`orders`] | grid-based order checkers returning [`orders::OrderVerdict`] |
//! | [`dependence`] | empirical copulas, Kendall's tau and Spearman's rho, correlation comparison |
//! | [`phr`] | proportional hazards model, cumulative-hazard transform, SI check |
//! | [`experiment`] | config-driven runs, reports and curve tables |
//! | [`oracle`] | brute-force permutation oracle and the self-test suite |

pub mod dependence;
pub mod dist;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod order_stats;
pub mod orders;
pub mod phr;

pub use error::{Error, Result};
