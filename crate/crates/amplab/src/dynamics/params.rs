use crate::{Error, Result};

/// Drift parameters of one equation. The linear symbol always carries the
/// full (stiff) operator; the drift handled by the nonlinear stage is
/// `nu_tilde * v - cubic * v^3` (with `|A|^2 A` as the cube in a-space).
#[derive(Debug, Clone)]
pub struct SDEParams {
    nu: f64,
    /// Always `nu + 1`: the symbols contain the extra `-1`.
    pub nu_tilde: f64,
    /// Cubic coefficient: 1 for the full equation, 3 for the amplitude one.
    pub cubic: f64,
    pub noise_on: bool,
    /// Galerkin truncation applied after every step (amplitude equation).
    pub band_limit: Option<i64>,
}

impl SDEParams {
    pub fn new(nu: f64, cubic: f64, noise_on: bool) -> Result<Self> {
        if cubic < 0.0 || !cubic.is_finite() || !nu.is_finite() {
            return Err(Error::Config(format!(
                "need finite nu and cubic >= 0, got nu={nu}, cubic={cubic}"
            )));
        }
        Ok(SDEParams {
            nu,
            nu_tilde: nu + 1.0,
            cubic,
            noise_on,
            band_limit: None,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn with_band_limit(mut self, band: i64) -> Self {
        self.band_limit = Some(band);
        self
    }
}
