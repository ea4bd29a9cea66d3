use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::DomainSpec;

/// Derive a stream id from its coordinates with a splitmix-style mixer so
/// that nearby (mode, sample) pairs land on unrelated streams.
pub fn stream_id(mode: i64, sample: u64, tag: u64) -> u64 {
    let mut x = (mode as u64)
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(sample.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(tag.wrapping_mul(0x94d0_49bb_1331_11eb));
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Counter-based Gaussian source: one (seed, stream_id) pair owns an
/// independent substream of the generator and always replays identically.
#[derive(Debug, Clone)]
pub struct WienerStream {
    pub seed: u64,
    pub stream_id: u64,
    rng: ChaCha8Rng,
}

impl WienerStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        WienerStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn next_real_std(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Standard complex Gaussian: E z = 0, E z^2 = 0, E |z|^2 = 1.
    pub fn next_complex_std(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.next_real_std(), s * self.next_real_std())
    }
}

/// One time step of cylindrical Wiener increments over `k` in `[-K, K]`,
/// with the reality constraint `dW_{-k} = conj(dW_k)` and a real zero mode
/// of variance `h`.
pub fn sample_increments(
    stream: &mut WienerStream,
    domain: DomainSpec,
    h: f64,
) -> Vec<Complex64> {
    let sqrt_h = h.sqrt();
    let mut dw = vec![Complex64::ZERO; domain.n_coeffs()];
    dw[domain.idx(0)] = Complex64::new(sqrt_h * stream.next_real_std(), 0.0);
    for k in 1..=domain.cutoff {
        let z = sqrt_h * stream.next_complex_std();
        dw[domain.idx(k)] = z;
        dw[domain.idx(-k)] = z.conj();
    }
    dw
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_domain;
    use std::f64::consts::PI;

    #[test]
    fn same_coordinates_replay_identically() {
        let d = make_domain(PI, 0.5, 8).unwrap();
        let mut a = WienerStream::new(42, stream_id(3, 7, 0));
        let mut b = WienerStream::new(42, stream_id(3, 7, 0));
        for _ in 0..5 {
            assert_eq!(sample_increments(&mut a, d, 0.1), sample_increments(&mut b, d, 0.1));
        }
        let mut c = WienerStream::new(42, stream_id(3, 8, 0));
        assert_ne!(sample_increments(&mut a, d, 0.1), sample_increments(&mut c, d, 0.1));
    }

    #[test]
    fn mirrored_modes_are_exact_conjugates() {
        let d = make_domain(PI, 0.5, 8).unwrap();
        let mut s = WienerStream::new(1, 0);
        let dw = sample_increments(&mut s, d, 0.3);
        for k in 1..=d.cutoff {
            assert_eq!(dw[d.idx(-k)], dw[d.idx(k)].conj());
        }
        assert_eq!(dw[d.idx(0)].im, 0.0);
    }

    #[test]
    fn empirical_moments_match_wiener_scaling() {
        let d = make_domain(PI, 0.5, 8).unwrap();
        let h = 0.05;
        let n = 100_000;
        let mut s = WienerStream::new(9, 1);
        let (mut m_abs, mut m_sq, mut m_zero) = (0.0, Complex64::ZERO, 0.0);
        for _ in 0..n {
            let dw = sample_increments(&mut s, d, h);
            let z = dw[d.idx(3)];
            m_abs += z.norm_sqr();
            m_sq += z * z;
            m_zero += dw[d.idx(0)].re.powi(2);
        }
        let nf = n as f64;
        // E|dW_k|^2 = h, E dW_k^2 = 0, E dW_0^2 = h; 3-sigma windows.
        let se = h / nf.sqrt();
        assert!((m_abs / nf - h).abs() < 3.0 * se, "got {}", m_abs / nf);
        assert!((m_sq / nf).norm() < 3.0 * se, "got {:?}", m_sq / nf);
        assert!(
            (m_zero / nf - h).abs() < 3.0 * se * 2.0_f64.sqrt(),
            "got {}",
            m_zero / nf
        );
    }
}
