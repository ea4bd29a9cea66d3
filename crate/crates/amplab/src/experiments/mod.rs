//! Monte Carlo studies that turn the approximation theorems into
//! measurable scaling laws: coupled-noise error ladders over epsilon,
//! slope fitting with bootstrap intervals, admissible initial data, and
//! empirical distances between mode marginals.

mod admissible;
mod config;
mod slope;
mod studies;
mod wasserstein;

pub use admissible::{admissible_amplitude, AdmissibilityReport, EpsAdmissibility};
pub use config::{StudyConfig, StudyKind};
pub use slope::{bootstrap_slope, fit_slope, EpsStat, ScalingResult};
pub use studies::{
    study_approximation, study_attractivity, study_concentration, study_ht_bounds,
    study_invariant_measure, study_linear_coupling, study_residual, HtBoundsReport, HtEpsRow,
};
pub use wasserstein::w1_empirical;
