use super::{ou_noise_gain, EquationTag, TrajectoryRecord};
use crate::noise::{sample_increments, WienerStream};
use crate::spectral::{FourierField, OperatorSymbol, Space};
use crate::{Error, Result};

/// Stochastic convolution `W_Lambda(t)` of the semigroup generated by a
/// diagonal symbol: per-mode OU recursion that is exact in law over every
/// step and consumes the same reality-constrained increments as the
/// nonlinear integrator.
pub fn stochastic_convolution(
    symbol: &OperatorSymbol,
    amplitudes: &[f64],
    stream: &mut WienerStream,
    t_final: f64,
    h: f64,
    stride: usize,
) -> Result<TrajectoryRecord> {
    let domain = symbol.domain;
    if amplitudes.len() != domain.n_coeffs() {
        return Err(Error::SizeMismatch(format!(
            "{} amplitudes for {} modes",
            amplitudes.len(),
            domain.n_coeffs()
        )));
    }
    if amplitudes.iter().any(|&a| a < 0.0) || t_final <= 0.0 || h <= 0.0 || stride == 0 {
        return Err(Error::Config(
            "need nonnegative amplitudes, t_final > 0, h > 0, stride > 0".into(),
        ));
    }
    let n_steps = (t_final / h).round() as usize;
    let sqrt_h = h.sqrt();
    let mut w = FourierField::zero(domain, Space::U);
    let mut times = vec![0.0];
    let mut snapshots = vec![w.clone()];
    for j in 0..n_steps {
        let dw = sample_increments(stream, domain, h);
        for i in 0..w.coeffs.len() {
            let lambda = symbol.eigenvalues[i];
            w.coeffs[i] = (h * lambda).exp() * w.coeffs[i]
                + amplitudes[i] * (ou_noise_gain(lambda, h) / sqrt_h) * dw[i];
        }
        if (j + 1) % stride == 0 {
            times.push((j + 1) as f64 * h);
            snapshots.push(w.clone());
        }
    }
    Ok(TrajectoryRecord {
        tag: EquationTag::Sh,
        times,
        snapshots,
        seed: stream.seed,
        h: h * stride as f64,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{ou_covariance, stream_id};
    use crate::spectral::make_domain;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// Symbol with every eigenvalue set to -1.
    fn flat_symbol(domain: crate::spectral::DomainSpec) -> OperatorSymbol {
        OperatorSymbol::generalized_sh(domain, |_| 0.0)
    }

    #[test]
    fn zero_amplitude_stays_zero() {
        let d = make_domain(PI, 0.5, 4).unwrap();
        let s = flat_symbol(d);
        let mut stream = WienerStream::new(1, 0);
        let amps = vec![0.0; d.n_coeffs()];
        let traj = stochastic_convolution(&s, &amps, &mut stream, 1.0, 0.01, 10).unwrap();
        for snap in &traj.snapshots {
            assert_eq!(snap.coeff_norm_sq(), 0.0);
        }
    }

    #[test]
    fn stationary_variance_and_covariance() {
        // lambda = -1, amplitude 1: E|W_k(t)|^2 = (1 - e^{-2t})/2 -> 1/2
        // and E W(t) conj(W(s)) = (e^{-|t-s|} - e^{-(t+s)})/2.
        let d = make_domain(PI, 0.5, 4).unwrap();
        let s = flat_symbol(d);
        let amps = vec![1.0; d.n_coeffs()];
        let n = 10_000;
        let (t_final, h, stride) = (3.0, 0.05, 20); // snapshots at 0, 1, 2, 3
        let mode = 2;
        let (mut var_end, mut cov) = (0.0, Complex64::ZERO);
        for sample in 0..n {
            let mut stream = WienerStream::new(77, stream_id(0, sample, 0));
            let traj =
                stochastic_convolution(&s, &amps, &mut stream, t_final, h, stride).unwrap();
            let w1 = traj.snapshots[1].get(mode); // t = 1
            let w3 = traj.snapshots[3].get(mode); // t = 3
            var_end += w3.norm_sqr();
            cov += w3 * w1.conj();
        }
        let nf = n as f64;
        let want_var = ou_covariance(1.0, 3.0, 3.0);
        let want_cov = ou_covariance(1.0, 3.0, 1.0);
        let se = 3.0 * want_var / nf.sqrt();
        assert!(
            (var_end / nf - want_var).abs() < se,
            "variance {} vs {want_var}",
            var_end / nf
        );
        assert!(
            (cov / nf - want_cov).norm() < 2.0 * se,
            "covariance {:?} vs {want_cov}",
            cov / nf
        );
    }

    #[test]
    fn real_modes_stay_real_and_mirrored() {
        let d = make_domain(PI, 0.5, 8).unwrap();
        let s = OperatorSymbol::sh(d);
        let amps = vec![1.0; d.n_coeffs()];
        let mut stream = WienerStream::new(4, 9);
        let traj = stochastic_convolution(&s, &amps, &mut stream, 0.5, 0.01, 25).unwrap();
        for snap in &traj.snapshots {
            assert!(snap.reality_residue() < 1e-12);
        }
    }
}
