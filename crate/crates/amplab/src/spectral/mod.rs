//! Domain geometry, Fourier fields, transforms, projections, norms and the
//! diagonal symbols of the linear operators.
//!
//! All fields are expanded in the orthonormal basis
//! `e_k(x) = exp(i k pi x / L) / sqrt(2L)` on `[-L, L]`, with coefficients
//! stored densely over `k in [-K, K]`.

mod domain;
mod field;
mod ops;
mod symbol;
mod transform;

pub use domain::{make_domain, nearest_int, DomainSpec};
pub use field::{FourierField, Space};
pub use ops::{band_project, inject_iota, norm, project_pi, NormKind};
pub use symbol::{OperatorSymbol, SymbolKind};
pub use transform::{
    dealiased_cube, dealiased_modulus_sq_times, eval_on_grid, field_from_grid, grid_size,
    C0_OVERSAMPLE,
};
