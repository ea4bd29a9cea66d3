//! Spatial correlation functions, per-mode noise coefficients, seeded
//! Wiener streams with the reality constraint, the mode-coupling map that
//! feeds both equations from one set of increments, and the series
//! representation of the scalar OU bridge process.

mod coefficients;
mod correlation;
mod coupling;
mod ou_series;
mod stream;

pub use coefficients::{build_noise_coefficients, Construction, NoiseCoefficients};
pub use correlation::{CorrelationKind, CorrelationSpec};
pub use coupling::{coupled_increments, CouplingMap};
pub use ou_series::{
    gaussian_series_stats, ou_coefficient, ou_covariance, ou_covariance_mc, ou_series_sample,
};
pub use stream::{sample_increments, stream_id, WienerStream};
