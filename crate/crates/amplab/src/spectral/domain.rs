use crate::{Error, Result};

/// Nearest integer with the conventions `[1/2] = 1` (half-integers round up
/// for nonnegative arguments) and `[-x] = -[x]`.
pub fn nearest_int(x: f64) -> i64 {
    if x < 0.0 {
        -nearest_int(-x)
    } else {
        (x + 0.5).floor() as i64
    }
}

/// Rescaled periodic domain geometry.
///
/// `N_eps` is the nearest integer to `L / (eps pi)`, `delta_eps = 1/eps - pi
/// N_eps / L` the detuning of the critical wavenumber from the mode grid, and
/// `rho_eps = N_eps pi eps / L` the critical mode in rescaled units. Always
/// `|delta_eps| <= pi / (2L)` and `rho_eps = 1 - eps delta_eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    /// Half-length of the rescaled domain `[-L, L]`.
    pub l: f64,
    /// Scale parameter, in `(0, 1]`.
    pub eps: f64,
    /// Mode cutoff: coefficients indexed `k in [-K, K]`.
    pub cutoff: i64,
    /// Nearest integer to `L / (eps pi)`.
    pub n_eps: i64,
    /// `1/eps - pi N_eps / L`.
    pub delta_eps: f64,
    /// `N_eps pi eps / L`.
    pub rho_eps: f64,
}

impl DomainSpec {
    /// Number of stored coefficients, `2K + 1`.
    pub fn n_coeffs(&self) -> usize {
        (2 * self.cutoff + 1) as usize
    }

    /// Dense-array index of mode `k`.
    #[inline]
    pub fn idx(&self, k: i64) -> usize {
        debug_assert!(k.abs() <= self.cutoff);
        (k + self.cutoff) as usize
    }

    /// Mode index of dense-array position `i`.
    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        i as i64 - self.cutoff
    }

    /// Largest amplitude-space mode `m` such that `|m| + N_eps <= K`, i.e.
    /// the widest symmetric band whose image под the `+N_eps` shift (and its
    /// mirror) stays representable.
    pub fn gl_band(&self) -> i64 {
        self.cutoff - self.n_eps
    }
}

/// Builds a [`DomainSpec`], validating `eps in (0,1]`, `L > 0` and that the
/// cutoff leaves room for the `+N_eps` index shift of the projection.
pub fn make_domain(l: f64, eps: f64, cutoff: i64) -> Result<DomainSpec> {
    if !(l > 0.0) {
        return Err(Error::InvalidDomain(format!("L must be positive, got {l}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidDomain(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    let ratio = l / (eps * std::f64::consts::PI);
    let needed = 2 * ratio.ceil() as i64;
    if cutoff < needed {
        return Err(Error::InvalidDomain(format!(
            "cutoff K = {cutoff} too small: the coupling shift needs K >= 2 ceil(L/(eps pi)) = {needed}"
        )));
    }
    let n_eps = nearest_int(ratio);
    let delta_eps = 1.0 / eps - std::f64::consts::PI * n_eps as f64 / l;
    let rho_eps = n_eps as f64 * std::f64::consts::PI * eps / l;
    Ok(DomainSpec {
        l,
        eps,
        cutoff,
        n_eps,
        delta_eps,
        rho_eps,
    })
}
