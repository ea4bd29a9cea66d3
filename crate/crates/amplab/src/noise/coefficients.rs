use super::{CorrelationKind, CorrelationSpec};
use crate::spectral::DomainSpec;
use crate::{Error, Result};

/// How the discrete coefficients are obtained from the continuum density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// `q_k = qhat(k pi eps / L)`: always nonnegative, zero deviation.
    SpectralSampling,
    /// Fourier coefficients of the periodically continued restriction of
    /// the correlation function to the domain. Positivity is not automatic
    /// and is checked.
    Restriction,
}

/// Discrete per-mode noise variances `q_k` over `k` in `[-K, K]`.
#[derive(Debug, Clone)]
pub struct NoiseCoefficients {
    pub qk: Vec<f64>,
    pub construction: Construction,
    pub domain: DomainSpec,
    /// `sup_k |sqrt(q_k) - sqrt(qhat(k pi eps / L))|`.
    pub deviation: f64,
}

impl NoiseCoefficients {
    pub fn get(&self, k: i64) -> f64 {
        self.qk[self.domain.idx(k)]
    }

    pub fn amplitude(&self, k: i64) -> f64 {
        self.get(k).sqrt()
    }
}

pub fn build_noise_coefficients(
    corr: &CorrelationSpec,
    domain: DomainSpec,
    construction: Construction,
) -> Result<NoiseCoefficients> {
    let mut qk = Vec::with_capacity(domain.n_coeffs());
    for k in -domain.cutoff..=domain.cutoff {
        let zeta = k as f64 * std::f64::consts::PI * domain.eps / domain.l;
        let q = match construction {
            Construction::SpectralSampling => corr.qhat(zeta),
            Construction::Restriction => restricted_coefficient(corr, domain, zeta)?,
        };
        if q < 0.0 {
            return Err(Error::NegativeCoefficient { k, value: q });
        }
        qk.push(q);
    }
    let deviation = (-domain.cutoff..=domain.cutoff)
        .zip(&qk)
        .map(|(k, &q)| {
            let zeta = k as f64 * std::f64::consts::PI * domain.eps / domain.l;
            (q.sqrt() - corr.qhat(zeta).sqrt()).abs()
        })
        .fold(0.0, f64::max);
    Ok(NoiseCoefficients {
        qk,
        construction,
        domain,
        deviation,
    })
}

/// Fourier coefficient of the restriction of the correlation kernel to
/// `[-L/eps, L/eps]`, in closed form per kernel family.
fn restricted_coefficient(
    corr: &CorrelationSpec,
    domain: DomainSpec,
    zeta: f64,
) -> Result<f64> {
    match &corr.kind {
        // Dirac kernel: restriction changes nothing.
        CorrelationKind::White => Ok(1.0),
        // Kernel e^{-|x|/ell} / (2 ell) truncated to half-width R = L/eps:
        // integrating e^{-x/ell} cos(zeta x) / ell over [0, R] gives
        // qhat(zeta) (1 - e^{-R/ell} (cos(zeta R) - ell zeta sin(zeta R))).
        CorrelationKind::Exponential { ell } => {
            let r = domain.l / domain.eps;
            let boundary = (-r / ell).exp() * ((zeta * r).cos() - ell * zeta * (zeta * r).sin());
            Ok(corr.qhat(zeta) * (1.0 - boundary))
        }
        CorrelationKind::Table { .. } => Err(Error::Unsupported(
            "restriction construction needs a closed-form kernel; \
             tabulated densities only support spectral sampling"
                .into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_domain;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn white_noise_is_flat_either_way() {
        let d = make_domain(PI, 0.5, 32).unwrap();
        for c in [Construction::SpectralSampling, Construction::Restriction] {
            let nc = build_noise_coefficients(&CorrelationSpec::white(), d, c).unwrap();
            assert!(nc.qk.iter().all(|&q| q == 1.0));
            assert_eq!(nc.deviation, 0.0);
        }
    }

    #[test]
    fn spectral_sampling_matches_density_exactly() {
        let d = make_domain(PI, 0.5, 32).unwrap();
        let corr = CorrelationSpec::exponential(1.0).unwrap();
        let nc =
            build_noise_coefficients(&corr, d, Construction::SpectralSampling).unwrap();
        for k in -d.cutoff..=d.cutoff {
            let zeta = k as f64 * PI * d.eps / d.l;
            assert_abs_diff_eq!(nc.get(k), 1.0 / (1.0 + zeta * zeta), epsilon = 1e-15);
        }
        assert_eq!(nc.deviation, 0.0);
        assert_eq!(nc.get(-5), nc.get(5));
    }

    #[test]
    fn restriction_deviation_is_order_eps() {
        let corr = CorrelationSpec::exponential(1.0).unwrap();
        for eps in [0.5, 0.25, 0.125] {
            let d = make_domain(PI, eps, 32).unwrap();
            let nc = build_noise_coefficients(&corr, d, Construction::Restriction).unwrap();
            assert!(
                nc.deviation <= eps,
                "eps={eps}: deviation {} too large",
                nc.deviation
            );
            assert_eq!(nc.get(-7), nc.get(7));
        }
    }

    #[test]
    fn table_restriction_is_unsupported() {
        let d = make_domain(PI, 0.5, 32).unwrap();
        let corr = CorrelationSpec::from_table(vec![(0.0, 1.0), (10.0, 0.5)]).unwrap();
        assert!(matches!(
            build_noise_coefficients(&corr, d, Construction::Restriction),
            Err(Error::Unsupported(_))
        ));
        assert!(build_noise_coefficients(&corr, d, Construction::SpectralSampling).is_ok());
    }
}
