use serde::Serialize;

use crate::noise::CorrelationSpec;
use crate::spectral::{make_domain, DomainSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StudyKind {
    Linear,
    Approx,
    Residual,
    Concentration,
    Attract,
    Invariant,
    HtBounds,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Linear => "linear",
            StudyKind::Approx => "approx",
            StudyKind::Residual => "residual",
            StudyKind::Concentration => "concentration",
            StudyKind::Attract => "attract",
            StudyKind::Invariant => "invariant",
            StudyKind::HtBounds => "htbounds",
        }
    }
}

/// Shared configuration for every Monte Carlo scaling study.
#[derive(Debug, Clone, Serialize)]
pub struct StudyConfig {
    pub kind: StudyKind,
    /// Strictly decreasing ladder of `eps` values.
    pub eps_ladder: Vec<f64>,
    /// Monte Carlo samples per rung.
    pub samples: usize,
    /// Time horizon in rescaled (slow) time.
    pub t0: f64,
    /// Domain half-length.
    pub l: f64,
    pub correlation: CorrelationSpec,
    pub seed: u64,
    /// Linear instability parameter in the rescaled equations.
    pub nu: f64,
    /// Spectral cutoff rule: `K = ceil(k_factor * L / (eps * pi))`.
    pub k_factor: f64,
    /// Step-size rule: `h = min(h_cap, eps^2 / 4)`.
    pub h_cap: f64,
    /// Matched-band radius of the coupling map; `None` picks a fixed 0.5,
    /// so the matched index band around the carrier grows like `1/eps`.
    pub band_radius: Option<f64>,
    /// Negative control: replace the coupling with independent streams.
    pub decoupled: bool,
    pub threads: usize,
    /// Burn-in time for the invariant-measure study.
    pub t_burn: f64,
    /// Averaging window after burn-in.
    pub window: f64,
    /// Where to drop per-epsilon trajectory snapshots, if anywhere.
    pub snapshot_dir: Option<std::path::PathBuf>,
}

impl StudyConfig {
    pub fn default_for(kind: StudyKind) -> Self {
        StudyConfig {
            kind,
            eps_ladder: vec![0.2, 0.1, 0.05],
            samples: 32,
            t0: 1.0,
            l: 2.0 * std::f64::consts::PI,
            correlation: CorrelationSpec::white(),
            seed: 1,
            nu: 1.0,
            k_factor: 3.0,
            h_cap: 1e-3,
            band_radius: None,
            decoupled: false,
            threads: 1,
            t_burn: 10.0,
            window: 20.0,
            snapshot_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_ladder.is_empty() {
            return Err(Error::Config("eps_ladder must be nonempty".into()));
        }
        for w in self.eps_ladder.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Config(format!(
                    "eps_ladder must be strictly decreasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if self.eps_ladder.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::Config("eps values must lie in (0, 1)".into()));
        }
        if self.samples < 8 {
            return Err(Error::Config(format!(
                "need at least 8 samples for slope fitting, got {}",
                self.samples
            )));
        }
        if !(self.t0 > 0.0) || !(self.l > 0.0) || !(self.h_cap > 0.0) {
            return Err(Error::Config(
                "t0, l and h_cap must be positive".into(),
            ));
        }
        if !(self.k_factor >= 1.0) {
            return Err(Error::Config("k_factor must be at least 1".into()));
        }
        if self.kind == StudyKind::Invariant && !(self.t_burn > 0.0 && self.window > 0.0) {
            return Err(Error::Config(
                "invariant study needs positive t_burn and window".into(),
            ));
        }
        Ok(())
    }

    /// Spectral grid for one rung of the ladder.
    pub fn domain_for(&self, eps: f64) -> Result<DomainSpec> {
        let cutoff = (self.k_factor * self.l / (eps * std::f64::consts::PI)).ceil() as i64;
        make_domain(self.l, eps, cutoff)
    }

    /// Step size for one rung: resolves the `1/eps^2` relaxation rate.
    pub fn h_for(&self, eps: f64) -> f64 {
        self.h_cap.min(eps * eps / 4.0)
    }

    pub fn band_radius_for(&self, _eps: f64) -> f64 {
        self.band_radius.unwrap_or(0.5)
    }
}
