//! Pseudospectral toolkit for the stochastic Swift-Hohenberg equation and its
//! Ginzburg-Landau amplitude equation on large periodic domains.
//!
//! The crate simulates the rescaled pair
//!
//! ```text
//! (SH)  du = L_eps u dt + (nu~ u - u^3) dt + dW_xi
//! (GL)  dA = D_eps A dt + (nu~ A - 3|A|^2 A) dt + sqrt(qhat(1)) dW_eta
//! ```
//!
//! on `[-L, L]` with explicitly coupled Fourier-mode noise, and measures the
//! eps-scaling of the coupling, residual, approximation, Fourier-concentration
//! and invariant-measure errors by Monte Carlo.
//!
//! Modules map onto the moving parts:
//! - [`spectral`]: domain geometry, Fourier fields, transforms, projections,
//!   norms and diagonal operator symbols;
//! - [`noise`]: correlation functions, discrete noise coefficients, seeded
//!   Wiener streams, the SH <-> GL mode coupling, and the OU series expansion;
//! - [`dynamics`]: exponential-Euler mild integrators, stochastic
//!   convolutions, the residual, and the semigroup-difference operator;
//! - [`derivation`]: generalized dispersion symbols and derivation of coupled
//!   amplitude systems with resonance coefficients;
//! - [`experiments`]: Monte Carlo scaling studies and slope fitting.

pub mod derivation;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod noise;
pub mod spectral;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
