//! Dispersion polynomials, their admissibility checks and quadratic models
//! near each zero, and the derivation of the coupled amplitude system with
//! exact resonance coefficients (checked against a brute-force
//! trigonometric expansion in integer arithmetic).

mod amplitude;
mod oracle;
mod poly;
mod symbol_spec;

pub use amplitude::{
    derive_amplitude_system, AmplitudeSystem, CubicTerm, Monomial, Nonlinearity,
};
pub use oracle::exact_cubic_coefficients;
pub use poly::{parse_poly, Poly};
pub use symbol_spec::{
    check_assumptions, default_band_radius, taylor_model, AssumptionReport, SymbolSpec,
    TaylorModel,
};
