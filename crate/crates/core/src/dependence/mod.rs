//! Copula estimation and concordance measures.

mod concordance;
mod copula;
mod distribution_free;
mod sathe;
mod tau;

pub use concordance::{empirical_rho, pearson, ConcordanceReport, ConcordanceSource};
pub use copula::{
    confidence_radius, empirical_copula, CopulaGrid, DEFAULT_RESOLUTION, MIN_COPULA_SAMPLE,
};
pub use distribution_free::{copula_distribution_free_check, iid_min_pairs, Coupling};
pub use sathe::{sathe_check, SatheComparison};
pub use tau::{
    empirical_tau, exact_tau_min_pair, exact_tau_min_pair_rational, tau_min_pair_float,
    MAX_RATIONAL_N,
};
