use num_complex::Complex64;

use super::{sample_increments, CorrelationSpec, NoiseCoefficients, WienerStream};
use crate::spectral::DomainSpec;
use crate::{Error, Result};

/// Joint realisation map between the two equations' noises: on the matched
/// band the amplitude equation reuses the full equation's increments after
/// shifting the index by the carrier wavenumber; elsewhere it draws fresh
/// independent increments.
#[derive(Debug, Clone)]
pub struct CouplingMap {
    pub domain: DomainSpec,
    /// Carrier index `N_eps` (or `k_j` for a general dispersion zero).
    pub shift: i64,
    /// `sqrt(q_k)` per full-equation mode `k` in `[-K, K]`.
    pub sh_amplitude: Vec<f64>,
    /// Single amplitude `sqrt(qhat(zeta_j))` used on every matched mode.
    pub gl_amplitude: f64,
    /// Full-equation modes `k` with `|k pi eps / L - zeta_j| < r`.
    pub matched: Vec<bool>,
    /// When set, the amplitude equation draws independent increments on
    /// every mode (negative control).
    pub decoupled: bool,
}

impl CouplingMap {
    pub fn new(
        domain: DomainSpec,
        coeffs: &NoiseCoefficients,
        corr: &CorrelationSpec,
        band_radius: f64,
        decoupled: bool,
    ) -> Result<Self> {
        Self::for_carrier(domain, coeffs, corr, domain.n_eps, 1.0, band_radius, decoupled)
    }

    /// General form: carrier index `k_j`, dispersion zero `zeta_j`.
    pub fn for_carrier(
        domain: DomainSpec,
        coeffs: &NoiseCoefficients,
        corr: &CorrelationSpec,
        carrier: i64,
        zeta_j: f64,
        band_radius: f64,
        decoupled: bool,
    ) -> Result<Self> {
        if domain != coeffs.domain {
            return Err(Error::GridMismatch(
                "noise coefficients built on a different domain".into(),
            ));
        }
        if !(band_radius > 0.0) {
            return Err(Error::Config(format!(
                "matched-band radius must be positive, got {band_radius}"
            )));
        }
        let sh_amplitude = coeffs.qk.iter().map(|q| q.sqrt()).collect();
        let matched = (-domain.cutoff..=domain.cutoff)
            .map(|k| {
                let zeta = k as f64 * std::f64::consts::PI * domain.eps / domain.l;
                (zeta - zeta_j).abs() < band_radius
            })
            .collect();
        Ok(CouplingMap {
            domain,
            shift: carrier,
            sh_amplitude,
            gl_amplitude: corr.qhat(zeta_j).sqrt(),
            matched,
            decoupled,
        })
    }

    pub fn is_matched(&self, k: i64) -> bool {
        self.matched[self.domain.idx(k)]
    }
}

/// One step of increments for both equations. The full equation's mode `k`
/// receives `sqrt(q_k) dW_k`; the amplitude equation's mode `m` receives
/// `gl_amplitude * dW_{m + shift}` when `m + shift` is matched and an
/// independent draw otherwise. Amplitude modes beyond the representable
/// band `K - shift` are left at zero.
pub fn coupled_increments(
    stream: &mut WienerStream,
    map: &CouplingMap,
    h: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = map.domain;
    let base = sample_increments(stream, d, h);
    let sh: Vec<Complex64> = base
        .iter()
        .zip(&map.sh_amplitude)
        .map(|(dw, amp)| amp * dw)
        .collect();
    let sqrt_h = h.sqrt();
    let mut gl = vec![Complex64::ZERO; d.n_coeffs()];
    let band = d.gl_band();
    for m in -band..=band {
        let k = m + map.shift;
        gl[d.idx(m)] = if !map.decoupled && k.abs() <= d.cutoff && map.is_matched(k) {
            map.gl_amplitude * base[d.idx(k)]
        } else {
            map.gl_amplitude * sqrt_h * stream.next_complex_std()
        };
    }
    (sh, gl)
}
