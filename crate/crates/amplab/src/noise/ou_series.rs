use num_complex::Complex64;

use super::WienerStream;

/// Series coefficient `a_{n,gamma}` with `a^2 = (T/2)(1 - (-1)^n e^{-gamma
/// T}) / (gamma^2 T^2 + pi^2 n^2)`. The prefactor T/2 comes from the
/// Fourier expansion of the stationary covariance `e^{-gamma|z|}/(2 gamma)`
/// on `[-T, T]` and is pinned down by the covariance checks below.
pub fn ou_coefficient(gamma: f64, t_horizon: f64, n: i64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let num = 0.5 * t_horizon * (1.0 - sign * (-gamma * t_horizon).exp());
    let den = gamma * gamma * t_horizon * t_horizon
        + std::f64::consts::PI.powi(2) * (n * n) as f64;
    (num / den).max(0.0).sqrt()
}

/// Magnitudes `a_{m,gamma}` for `m` in `[-n, n]`, with the `e^{-gamma T}`
/// factor hoisted out of the per-mode formula.
fn coefficient_table(gamma: f64, t_horizon: f64, n: i64) -> Vec<f64> {
    let e = (-gamma * t_horizon).exp();
    let g2t2 = gamma * gamma * t_horizon * t_horizon;
    (-n..=n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let num = 0.5 * t_horizon * (1.0 - sign * e);
            let den = g2t2 + std::f64::consts::PI.powi(2) * (m * m) as f64;
            (num / den).max(0.0).sqrt()
        })
        .collect()
}

/// One sample path of the complex OU process started at zero,
/// `a(t) = sum_{|n| <= N} a_{n,gamma} xi_n (e^{i pi n t / T} - e^{-gamma t})`,
/// evaluated on `times` (which must lie in `[0, T]`).
pub fn ou_series_sample(
    gamma: f64,
    t_horizon: f64,
    n_terms: usize,
    stream: &mut WienerStream,
    times: &[f64],
) -> Vec<Complex64> {
    let n = n_terms as i64;
    let table = coefficient_table(gamma, t_horizon, n);
    // Draw in a fixed order so a path is reproducible from its stream.
    let coeffs: Vec<Complex64> = table
        .iter()
        .map(|&a| a * stream.next_complex_std())
        .collect();
    times
        .iter()
        .map(|&t| {
            let decay = (-gamma * t).exp();
            // March the phase e^{i pi m t / T} by one recurrence step per
            // term instead of a sin/cos pair; the drift over the series
            // length is far below the Monte Carlo noise floor.
            let step = Complex64::from_polar(1.0, std::f64::consts::PI * t / t_horizon);
            let mut phase =
                Complex64::from_polar(1.0, -std::f64::consts::PI * n as f64 * t / t_horizon);
            let mut acc = Complex64::ZERO;
            for &c in &coeffs {
                acc += c * (phase - decay);
                phase *= step;
            }
            acc
        })
        .collect()
}

/// Monte Carlo estimate of the covariances `E a(t_i) conj(a(t_j))` of the
/// truncated series at the given index `pairs` into `times`, using one
/// reproducible stream per sample. Returns `(mean, standard error)` per
/// pair. Draws coefficients in the same order as [`ou_series_sample`], so
/// sample `s` sees exactly the path that
/// `ou_series_sample(gamma, t_horizon, n_terms, stream(s), times)` yields;
/// the table and time loop are merely fused for speed.
pub fn ou_covariance_mc(
    gamma: f64,
    t_horizon: f64,
    n_terms: usize,
    times: &[f64],
    pairs: &[(usize, usize)],
    samples: u64,
    stream_of: impl Fn(u64) -> WienerStream,
) -> Vec<(f64, f64)> {
    let n = n_terms as i64;
    let table = coefficient_table(gamma, t_horizon, n);
    let decays: Vec<f64> = times.iter().map(|&t| (-gamma * t).exp()).collect();
    let steps: Vec<Complex64> = times
        .iter()
        .map(|&t| Complex64::from_polar(1.0, std::f64::consts::PI * t / t_horizon))
        .collect();
    let mut sums = vec![0.0; pairs.len()];
    let mut sq_sums = vec![0.0; pairs.len()];
    let mut path = vec![Complex64::ZERO; times.len()];
    for sample in 0..samples {
        let mut stream = stream_of(sample);
        path.fill(Complex64::ZERO);
        let mut phases: Vec<Complex64> = times
            .iter()
            .map(|&t| {
                Complex64::from_polar(1.0, -std::f64::consts::PI * n as f64 * t / t_horizon)
            })
            .collect();
        for &a in &table {
            let c = a * stream.next_complex_std();
            for ((acc, phase), (&step, &decay)) in path
                .iter_mut()
                .zip(phases.iter_mut())
                .zip(steps.iter().zip(decays.iter()))
            {
                *acc += c * (*phase - decay);
                *phase *= step;
            }
        }
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let v = (path[i] * path[j].conj()).re;
            sums[p] += v;
            sq_sums[p] += v * v;
        }
    }
    let m = samples as f64;
    sums.iter()
        .zip(sq_sums.iter())
        .map(|(&s, &sq)| {
            let mean = s / m;
            let var = (sq / m - mean * mean).max(0.0);
            (mean, (var / m).sqrt())
        })
        .collect()
}

/// Closed-form covariance `E a(t) conj(a(s))` of the zero-started OU
/// process: `(e^{-gamma |t-s|} - e^{-gamma (t+s)}) / (2 gamma)`.
pub fn ou_covariance(gamma: f64, t: f64, s: f64) -> f64 {
    ((-gamma * (t - s).abs()).exp() - (-gamma * (t + s)).exp()) / (2.0 * gamma)
}

/// Summability statistics of a Gaussian series over a finite function
/// family given as `(sup_norm, lipschitz)` pairs:
/// `S1^2 = sum |f|^2`, `S2^2 = sum |f|^{2-delta} Lip(f)^delta`.
pub fn gaussian_series_stats(functions: &[(f64, f64)], delta: f64) -> (f64, f64) {
    let s1: f64 = functions.iter().map(|&(sup, _)| sup * sup).sum();
    let s2: f64 = functions
        .iter()
        .map(|&(sup, lip)| sup.powf(2.0 - delta) * lip.powf(delta))
        .sum();
    (s1.sqrt(), s2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn path_starts_at_zero_for_any_truncation() {
        for n_terms in [1, 5, 50] {
            let mut s = WienerStream::new(5, n_terms as u64);
            let path = ou_series_sample(1.0, 2.0, n_terms, &mut s, &[0.0, 1.0]);
            assert_eq!(path[0], Complex64::ZERO);
            assert_ne!(path[1], Complex64::ZERO);
        }
    }

    #[test]
    fn coefficients_decay_like_one_over_n() {
        let (gamma, t) = (0.7, 2.0);
        let c = 2.0 * ou_coefficient(gamma, t, 1);
        for n in 1..500 {
            assert!(ou_coefficient(gamma, t, n) <= c / (1.0 + n as f64));
        }
    }

    #[test]
    fn coefficient_series_sums_to_the_stationary_variance() {
        // sum_n a_n^2 must equal the stationary variance 1/(2 gamma) minus
        // nothing: at t -> infinity only the oscillatory part survives and
        // E|a|^2 -> sum a_n^2, so the tail-summed series pins the constant.
        for gamma in [0.5, 1.0, 4.0] {
            let t = 2.0;
            let total: f64 = (-20_000_i64..=20_000)
                .map(|n| ou_coefficient(gamma, t, n).powi(2))
                .sum();
            assert_abs_diff_eq!(total, 1.0 / (2.0 * gamma), epsilon = 1e-4);
        }
    }

    #[test]
    fn empirical_variance_matches_ito_isometry() {
        let (gamma, t_h) = (1.0, 2.0);
        let times = [0.5, 1.0, 2.0];
        let n_terms = 400;
        let samples = 4000;
        let mut acc = [0.0; 3];
        let mut s = WienerStream::new(21, 0);
        for _ in 0..samples {
            let path = ou_series_sample(gamma, t_h, n_terms, &mut s, &times);
            for (a, v) in acc.iter_mut().zip(&path) {
                *a += v.norm_sqr();
            }
        }
        for (i, &t) in times.iter().enumerate() {
            let want = (1.0 - (-2.0 * t).exp()) / 2.0; // = ou_covariance(1,t,t)
            let got = acc[i] / samples as f64;
            let tol = 3.0 * want / (samples as f64).sqrt() + 2.0 / n_terms as f64;
            assert!((got - want).abs() < tol, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn covariance_mc_replays_the_sample_paths_exactly() {
        let (gamma, t_h) = (0.8, 1.5);
        let times = [0.25, 0.75, 1.5];
        let pairs = [(0, 0), (1, 0), (2, 1)];
        let samples = 64;
        let fused = ou_covariance_mc(gamma, t_h, 30, &times, &pairs, samples, |s| {
            WienerStream::new(9, s)
        });
        let mut sums = [0.0; 3];
        for s in 0..samples {
            let mut stream = WienerStream::new(9, s);
            let path = ou_series_sample(gamma, t_h, 30, &mut stream, &times);
            for (acc, &(i, j)) in sums.iter_mut().zip(&pairs) {
                *acc += (path[i] * path[j].conj()).re;
            }
        }
        for (acc, (mean, se)) in sums.iter().zip(&fused) {
            assert_abs_diff_eq!(acc / samples as f64, *mean, epsilon = 1e-12);
            assert!(*se > 0.0);
        }
    }

    #[test]
    fn series_stats_examples() {
        let (s1, s2) = gaussian_series_stats(&[(2.0, 3.0)], 1.0);
        assert_abs_diff_eq!(s1, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s2, 6.0_f64.sqrt(), epsilon = 1e-15);
        assert_eq!(gaussian_series_stats(&[], 0.5), (0.0, 0.0));
    }
}
