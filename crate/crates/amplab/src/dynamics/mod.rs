//! Mild-solution time stepping for the full fourth-order equation and its
//! amplitude equation, the per-mode stochastic convolution, the discrete
//! residual, and the semigroup-difference operator.

mod convolution;
mod h_operator;
mod integrator;
mod params;
mod residual;
mod trajectory;

pub use convolution::stochastic_convolution;
pub use h_operator::{h_operator, HtNorms};
pub use integrator::{
    ou_noise_gain, phi1, sample_increments_free, simulate, simulate_coupled, step,
    CoupledTrajectories,
};
pub use params::SDEParams;
pub use residual::{residual, ResidualReport};
pub use trajectory::{EquationTag, TrajectoryRecord};
