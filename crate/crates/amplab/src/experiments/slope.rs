use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Per-epsilon Monte Carlo statistics of one study.
#[derive(Debug, Clone, Serialize)]
pub struct EpsStat {
    pub eps: f64,
    pub mean: f64,
    pub std_error: f64,
    pub errors: Vec<f64>,
}

/// Outcome of an epsilon-ladder scaling study.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingResult {
    pub per_eps: Vec<EpsStat>,
    /// OLS slope of `log(mean error)` against `log(eps)`.
    pub slope: f64,
    /// 95% bootstrap interval from resampling each epsilon's samples.
    pub slope_ci: (f64, f64),
    pub target_slope: f64,
    pub threshold: f64,
    pub pass: bool,
    pub aborted: usize,
}

impl ScalingResult {
    pub fn from_samples(
        per_eps: Vec<(f64, Vec<f64>)>,
        target_slope: f64,
        threshold: f64,
        aborted: usize,
        max_abort_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        let stats: Vec<EpsStat> = per_eps
            .iter()
            .map(|(eps, errors)| {
                let n = errors.len() as f64;
                let mean = errors.iter().sum::<f64>() / n;
                let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>()
                    / (n - 1.0).max(1.0);
                EpsStat {
                    eps: *eps,
                    mean,
                    std_error: (var / n).sqrt(),
                    errors: errors.clone(),
                }
            })
            .collect();
        let points: Vec<(f64, f64)> = stats.iter().map(|s| (s.eps, s.mean)).collect();
        let slope = fit_slope(&points)?;
        let slope_ci = bootstrap_slope(&per_eps, 200, seed)?;
        let total: usize = per_eps.iter().map(|(_, e)| e.len()).sum();
        let abort_ok = (aborted as f64) <= max_abort_fraction * (aborted + total) as f64;
        let pass = slope >= threshold && abort_ok;
        Ok(ScalingResult {
            per_eps: stats,
            slope,
            slope_ci,
            target_slope,
            threshold,
            pass,
            aborted,
        })
    }
}

/// Least-squares slope of `log(value)` against `log(eps)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    let mut xs: Vec<f64> = points.iter().map(|&(e, _)| e).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    if xs.len() < 3 {
        return Err(Error::SlopeFit(format!(
            "need at least 3 distinct epsilon values, got {}",
            xs.len()
        )));
    }
    if points.iter().any(|&(e, v)| !(e > 0.0) || !(v > 0.0)) {
        return Err(Error::SlopeFit(
            "all epsilons and values must be positive".into(),
        ));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(e, v) in points {
        let (x, y) = (e.ln(), v.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::SlopeFit("degenerate epsilon ladder".into()));
    }
    Ok((n * sxy - sx * sy) / denom)
}

/// 95% interval of the slope under per-epsilon resampling with
/// replacement (at least 200 resamples).
pub fn bootstrap_slope(
    per_eps: &[(f64, Vec<f64>)],
    resamples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let resamples = resamples.max(200);
    if per_eps.iter().any(|(_, e)| e.is_empty()) {
        return Err(Error::SlopeFit("empty sample set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x626f_6f74);
    let mut slopes = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let points: Vec<(f64, f64)> = per_eps
            .iter()
            .map(|(eps, errors)| {
                let mean = (0..errors.len())
                    .map(|_| errors[rng.random_range(0..errors.len())])
                    .sum::<f64>()
                    / errors.len() as f64;
                (*eps, mean.max(f64::MIN_POSITIVE))
            })
            .collect();
        slopes.push(fit_slope(&points)?);
    }
    slopes.sort_by(f64::total_cmp);
    let lo = slopes[(0.025 * (resamples - 1) as f64).round() as usize];
    let hi = slopes[(0.975 * (resamples - 1) as f64).round() as usize];
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&e: &f64| (e, e.sqrt()))
            .collect();
        assert_abs_diff_eq!(fit_slope(&pts).unwrap(), 0.5, epsilon = 1e-12);
        let flat: Vec<(f64, f64)> = [0.2, 0.1, 0.05].iter().map(|&e| (e, 2.0)).collect();
        assert_abs_diff_eq!(fit_slope(&flat).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_slope(&[(0.1, 1.0), (0.1, 1.0), (0.1, 1.0)]).is_err());
        assert!(fit_slope(&[(0.2, 1.0), (0.1, 1.0)]).is_err());
        assert!(fit_slope(&[(0.2, 1.0), (0.1, -1.0), (0.05, 1.0)]).is_err());
    }

    #[test]
    fn bootstrap_covers_a_known_exponent() {
        // Noisy power law v = eps^0.5 * exp(10% noise): the 95% CI should
        // cover 0.5 in at least 90% of replications.
        let epses = [0.4, 0.2, 0.1, 0.05];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut covered = 0;
        let reps = 100;
        for _ in 0..reps {
            let per_eps: Vec<(f64, Vec<f64>)> = epses
                .iter()
                .map(|&e: &f64| {
                    let samples: Vec<f64> = (0..32)
                        .map(|_| {
                            let noise: f64 = rng.random::<f64>() - 0.5;
                            e.sqrt() * (0.2 * noise).exp()
                        })
                        .collect();
                    (e, samples)
                })
                .collect();
            let (lo, hi) = bootstrap_slope(&per_eps, 200, rng.random()).unwrap();
            if lo <= 0.5 && 0.5 <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 90, "covered only {covered}/{reps}");
    }

    #[test]
    fn scaling_result_pass_logic() {
        let per_eps: Vec<(f64, Vec<f64>)> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&e: &f64| (e, vec![e.sqrt(); 8]))
            .collect();
        let r = ScalingResult::from_samples(per_eps.clone(), 0.5, 0.35, 0, 0.05, 1).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.slope, 0.5, epsilon = 1e-9);
        // too many aborts flips the flag
        let r2 = ScalingResult::from_samples(per_eps, 0.5, 0.35, 10, 0.05, 1).unwrap();
        assert!(!r2.pass);
    }
}
