use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::admissible::{admissible_amplitude, median, AdmissibilityReport, EpsAdmissibility};
use super::{ScalingResult, StudyConfig};
use crate::dynamics::{
    h_operator, ou_noise_gain, residual, simulate, simulate_coupled, step, EquationTag,
    SDEParams, TrajectoryRecord,
};
use crate::noise::{
    build_noise_coefficients, coupled_increments, sample_increments, stream_id, Construction,
    CouplingMap, WienerStream,
};
use crate::spectral::{
    band_project, norm, project_pi, FourierField, NormKind, OperatorSymbol, Space,
};
use crate::{Error, Result};

const TAG_LINEAR: u64 = 1;
const TAG_APPROX: u64 = 2;
const TAG_RESIDUAL: u64 = 3;
const TAG_CONCENTRATION: u64 = 4;
const TAG_ATTRACT: u64 = 5;
const TAG_INVARIANT: u64 = 6;

const SLOPE_TARGET: f64 = 0.5;
const SLOPE_THRESHOLD: f64 = 0.35;
const MAX_ABORT_FRACTION: f64 = 0.05;

/// Run one error functional over the (eps, sample) grid. Each sample draws
/// from its own counter-derived stream, so results do not depend on the
/// number of worker threads; `Ok(None)` marks a blow-up abort.
fn run_ladder<F>(config: &StudyConfig, per_sample: F) -> Result<(Vec<(f64, Vec<f64>)>, usize)>
where
    F: Fn(usize, f64, usize) -> Result<Option<f64>> + Sync,
{
    config.validate()?;
    let mut per_eps = Vec::new();
    let mut aborted = 0;
    for (ei, &eps) in config.eps_ladder.iter().enumerate() {
        let outcomes: Vec<Result<Option<f64>>> = (0..config.samples)
            .into_par_iter()
            .map(|s| per_sample(ei, eps, s))
            .collect();
        let mut errors = Vec::new();
        for outcome in outcomes {
            match outcome? {
                Some(e) if e.is_nan() => {
                    return Err(Error::AssumptionFailed("NaN sample error".into()))
                }
                Some(e) => errors.push(e),
                None => aborted += 1,
            }
        }
        if errors.is_empty() {
            return Err(Error::BlowUp {
                t: config.t0,
                norm: f64::INFINITY,
            });
        }
        per_eps.push((eps, errors));
    }
    Ok((per_eps, aborted))
}

fn coupling_for(config: &StudyConfig, eps: f64) -> Result<CouplingMap> {
    let domain = config.domain_for(eps)?;
    let coeffs =
        build_noise_coefficients(&config.correlation, domain, Construction::SpectralSampling)?;
    CouplingMap::new(
        domain,
        &coeffs,
        &config.correlation,
        config.band_radius_for(eps),
        config.decoupled,
    )
}

fn stream_for(config: &StudyConfig, eps_idx: usize, sample: usize, tag: u64) -> WienerStream {
    WienerStream::new(config.seed, stream_id(eps_idx as i64, sample as u64, tag))
}

fn sup_c0_difference(u: &FourierField, a: &FourierField) -> Result<f64> {
    let pia = project_pi(a)?;
    let mut diff = u.clone();
    for (c, p) in diff.coeffs.iter_mut().zip(&pia.coeffs) {
        *c -= p;
    }
    norm(&diff, NormKind::C0)
}

/// Sup over time of the C0 gap between the two coupled stochastic
/// convolutions, per sample; the gap should vanish like `sqrt(eps)` when
/// the matched band shares increments and saturate when decoupled.
pub fn study_linear_coupling(config: &StudyConfig) -> Result<ScalingResult> {
    let (per_eps, aborted) = run_ladder(config, |ei, eps, sample| {
        let map = coupling_for(config, eps)?;
        let d = map.domain;
        let h = config.h_for(eps);
        let mut stream = stream_for(config, ei, sample, TAG_LINEAR);
        let sym_sh = OperatorSymbol::sh(d);
        let sym_gl = OperatorSymbol::gl(d);
        let n_steps = (config.t0 / h).round().max(1.0) as usize;
        let stride = (n_steps / 200).max(1);
        let sqrt_h = h.sqrt();
        let mut w_full = FourierField::zero(d, Space::U);
        let mut w_amp = FourierField::zero(d, Space::A);
        let mut sup = 0.0_f64;
        for j in 0..n_steps {
            let (dw_sh, dw_gl) = coupled_increments(&mut stream, &map, h);
            for i in 0..w_full.coeffs.len() {
                let ls = sym_sh.eigenvalues[i];
                w_full.coeffs[i] =
                    (h * ls).exp() * w_full.coeffs[i] + (ou_noise_gain(ls, h) / sqrt_h) * dw_sh[i];
                let lg = sym_gl.eigenvalues[i];
                w_amp.coeffs[i] =
                    (h * lg).exp() * w_amp.coeffs[i] + (ou_noise_gain(lg, h) / sqrt_h) * dw_gl[i];
            }
            if (j + 1) % stride == 0 || j + 1 == n_steps {
                sup = sup.max(sup_c0_difference(&w_full, &w_amp)?);
            }
        }
        Ok(Some(sup))
    })?;
    ScalingResult::from_samples(
        per_eps,
        SLOPE_TARGET,
        SLOPE_THRESHOLD,
        aborted,
        MAX_ABORT_FRACTION,
        config.seed,
    )
}

/// Sup over time of `||u - pi A||_C0` for coupled nonlinear runs started
/// from `u(0) = pi A(0)` with admissible `A(0)`.
pub fn study_approximation(config: &StudyConfig) -> Result<ScalingResult> {
    let (per_eps, aborted) = run_ladder(config, |ei, eps, sample| {
        let map = coupling_for(config, eps)?;
        let d = map.domain;
        let h = config.h_for(eps);
        let mut stream = stream_for(config, ei, sample, TAG_APPROX);
        let a0 = admissible_amplitude(d, &mut stream);
        let u0 = project_pi(&a0)?;
        let n_steps = (config.t0 / h).round().max(1.0) as usize;
        let stride = (n_steps / 100).max(1);
        let run = match simulate_coupled(
            &u0, &a0, config.nu, &map, config.t0, h, &mut stream, stride, false,
        ) {
            Ok(run) => run,
            Err(Error::BlowUp { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut sup = 0.0_f64;
        for (u, a) in run.sh.snapshots.iter().zip(&run.gl.snapshots) {
            sup = sup.max(sup_c0_difference(u, a)?);
        }
        Ok(Some(sup))
    })?;
    ScalingResult::from_samples(
        per_eps,
        SLOPE_TARGET,
        SLOPE_THRESHOLD,
        aborted,
        MAX_ABORT_FRACTION,
        config.seed,
    )
}

/// Sup over time of the full equation's mild residual evaluated on the
/// projected amplitude solution.
pub fn study_residual(config: &StudyConfig) -> Result<ScalingResult> {
    let (per_eps, aborted) = run_ladder(config, |ei, eps, sample| {
        let map = coupling_for(config, eps)?;
        let d = map.domain;
        let h = config.h_for(eps);
        let mut stream = stream_for(config, ei, sample, TAG_RESIDUAL);
        let a0 = admissible_amplitude(d, &mut stream);
        let params_gl = SDEParams::new(config.nu, 3.0, true)?.with_band_limit(d.gl_band());
        let sym_gl = OperatorSymbol::gl(d);
        let sym_sh = OperatorSymbol::sh(d);
        let n_steps = (config.t0 / h).round().max(1.0) as usize;
        let sqrt_h = h.sqrt();

        // Amplitude path and the full equation's stochastic convolution
        // from the same increment source, recorded at every step so the
        // residual quadrature matches the integrator exactly.
        let mut a = band_project(&a0, d.gl_band() as f64, false);
        let mut w = FourierField::zero(d, Space::U);
        let mut times = vec![0.0];
        let mut snaps_a = vec![a.clone()];
        let mut snaps_w = vec![w.clone()];
        for j in 0..n_steps {
            let (dw_sh, dw_gl) = coupled_increments(&mut stream, &map, h);
            a = match step(&a, &params_gl, &sym_gl, h, Some(&dw_gl)) {
                Ok(a) => a,
                Err(Error::BlowUp { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            if a.coeffs.iter().map(|c| c.norm()).sum::<f64>() / (2.0 * d.l).sqrt() > 1e3 {
                return Ok(None);
            }
            for i in 0..w.coeffs.len() {
                let ls = sym_sh.eigenvalues[i];
                w.coeffs[i] =
                    (h * ls).exp() * w.coeffs[i] + (ou_noise_gain(ls, h) / sqrt_h) * dw_sh[i];
            }
            times.push((j + 1) as f64 * h);
            snaps_a.push(a.clone());
            snaps_w.push(w.clone());
        }
        let gl = TrajectoryRecord {
            tag: EquationTag::Gl,
            times: times.clone(),
            snapshots: snaps_a,
            seed: stream.seed,
            h,
            domain: d,
        };
        let w_sh = TrajectoryRecord {
            tag: EquationTag::Sh,
            times,
            snapshots: snaps_w,
            seed: stream.seed,
            h,
            domain: d,
        };
        let params_sh = SDEParams::new(config.nu, 1.0, true)?;
        let report = residual(&gl, &w_sh, &params_sh, false)?;
        Ok(Some(report.sup_c0_over_time))
    })?;
    ScalingResult::from_samples(
        per_eps,
        SLOPE_TARGET,
        SLOPE_THRESHOLD,
        aborted,
        MAX_ABORT_FRACTION,
        config.seed,
    )
}

const CONCENTRATION_DELTA: f64 = 1.0 / 3.0;

/// Sup over time of the C0 mass of the amplitude solution beyond the
/// wavenumber `delta / eps` (mode index `delta L / (pi eps)`), delta = 1/3.
pub fn study_concentration(config: &StudyConfig) -> Result<ScalingResult> {
    let (per_eps, aborted) = run_ladder(config, |ei, eps, sample| {
        let d = config.domain_for(eps)?;
        let h = config.h_for(eps);
        let mut stream = stream_for(config, ei, sample, TAG_CONCENTRATION);
        let a0 = admissible_amplitude(d, &mut stream);
        let params = SDEParams::new(config.nu, 3.0, true)?.with_band_limit(d.gl_band());
        let sym = OperatorSymbol::gl(d);
        let gl_amp = config.correlation.qhat(1.0).sqrt();
        let amps: Vec<f64> = (-d.cutoff..=d.cutoff)
            .map(|m| if m.abs() <= d.gl_band() { gl_amp } else { 0.0 })
            .collect();
        let n_steps = (config.t0 / h).round().max(1.0) as usize;
        let stride = (n_steps / 100).max(1);
        let traj = match simulate(
            &a0,
            &params,
            &sym,
            EquationTag::Gl,
            config.t0,
            h,
            Some((&mut stream, &amps)),
            stride,
        ) {
            Ok(t) => t,
            Err(Error::BlowUp { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let cut = CONCENTRATION_DELTA * d.l / (std::f64::consts::PI * eps);
        let mut sup = 0.0_f64;
        for snap in &traj.snapshots {
            let tail = band_project(snap, cut, true);
            sup = sup.max(norm(&tail, NormKind::C0)?);
        }
        Ok(Some(sup))
    })?;
    ScalingResult::from_samples(
        per_eps,
        SLOPE_TARGET,
        SLOPE_THRESHOLD,
        aborted,
        MAX_ABORT_FRACTION,
        config.seed,
    )
}

/// Start the full equation from large non-admissible data (C0 norm 10) and
/// check the cubic has pulled the solution to its saturation level by the
/// horizon, with the remainder `u - e^{tL} u(0) - W_L` bounded in H^1.
pub fn study_attractivity(config: &StudyConfig) -> Result<AdmissibilityReport> {
    config.validate()?;
    let nu_tilde = config.nu + 1.0;
    if nu_tilde <= 0.0 {
        return Err(Error::Config(
            "attractivity study needs nu > -1 for a saturation level".into(),
        ));
    }
    let saturation_bound = 5.0 * nu_tilde.sqrt();
    let mut per_eps = Vec::new();
    for (ei, &eps) in config.eps_ladder.iter().enumerate() {
        let map = coupling_for(config, eps)?;
        let d = map.domain;
        let h = config.h_for(eps);
        let params = SDEParams::new(config.nu, 1.0, true)?;
        let sym = OperatorSymbol::sh(d);
        let n_steps = (config.t0 / h).round().max(1.0) as usize;
        let sqrt_h = h.sqrt();
        // u(0) = 10 cos(N pi x / L): sup norm exactly 10, concentrated on
        // the carrier but far above the attracting ball.
        let mut u0 = FourierField::zero(d, Space::U);
        let c = 5.0 * (2.0 * d.l).sqrt();
        u0.set(d.n_eps, Complex64::new(c, 0.0));
        u0.set(-d.n_eps, Complex64::new(c, 0.0));

        let outcomes: Vec<Result<(f64, f64)>> = (0..config.samples)
            .into_par_iter()
            .map(|sample| {
                let mut stream = stream_for(config, ei, sample, TAG_ATTRACT);
                let mut u = u0.clone();
                let mut w = FourierField::zero(d, Space::U);
                for _ in 0..n_steps {
                    let raw = sample_increments(&mut stream, d, h);
                    let dw: Vec<Complex64> = raw
                        .iter()
                        .zip(&map.sh_amplitude)
                        .map(|(x, amp)| amp * x)
                        .collect();
                    u = step(&u, &params, &sym, h, Some(&dw))?;
                    for i in 0..w.coeffs.len() {
                        let l = sym.eigenvalues[i];
                        w.coeffs[i] =
                            (h * l).exp() * w.coeffs[i] + (ou_noise_gain(l, h) / sqrt_h) * dw[i];
                    }
                }
                let c0 = norm(&u, NormKind::C0)?;
                let mut rem = u.clone();
                for i in 0..rem.coeffs.len() {
                    let flow = (config.t0 * sym.eigenvalues[i]).exp();
                    rem.coeffs[i] -= flow * u0.coeffs[i] + w.coeffs[i];
                }
                let h1 = norm(&rem, NormKind::HAlpha(1.0))?;
                Ok((c0, h1))
            })
            .collect();
        let mut c0_norms = Vec::new();
        let mut h1_remainders = Vec::new();
        for outcome in outcomes {
            let (c0, h1) = outcome?;
            c0_norms.push(c0);
            h1_remainders.push(h1);
        }
        let m4 = h1_remainders.iter().map(|x| x.powi(4)).sum::<f64>()
            / h1_remainders.len() as f64;
        per_eps.push(EpsAdmissibility {
            eps,
            median_c0: median(&c0_norms),
            c0_norms,
            h1_remainders,
            h1_fourth_moment: m4,
        });
    }
    let pass = per_eps.iter().all(|row| {
        row.median_c0 <= saturation_bound
            && row.h1_fourth_moment.is_finite()
            && row.h1_remainders.iter().all(|x| x.is_finite())
    });
    Ok(AdmissibilityReport {
        saturation_bound,
        per_eps,
        pass,
    })
}

/// Post-burn-in time average of `||u - pi A||_C0` along coupled runs: a
/// computable surrogate that upper-bounds the stationary transport distance
/// through this particular coupling.
pub fn study_invariant_measure(config: &StudyConfig) -> Result<ScalingResult> {
    let relaxation = 1.0 / config.nu.abs().max(1e-9);
    if config.t_burn < 5.0 * relaxation {
        eprintln!(
            "warning: burn-in {} is shorter than 5 relaxation times ({:.2})",
            config.t_burn,
            5.0 * relaxation
        );
    }
    let t_total = config.t_burn + config.window;
    let (per_eps, aborted) = run_ladder(config, |ei, eps, sample| {
        let map = coupling_for(config, eps)?;
        let d = map.domain;
        let h = config.h_for(eps);
        let mut stream = stream_for(config, ei, sample, TAG_INVARIANT);
        let a0 = admissible_amplitude(d, &mut stream);
        let u0 = project_pi(&a0)?;
        let stride = ((0.25 / h).round() as usize).max(1);
        let run = match simulate_coupled(
            &u0, &a0, config.nu, &map, t_total, h, &mut stream, stride, false,
        ) {
            Ok(run) => run,
            Err(Error::BlowUp { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut sum = 0.0;
        let mut count = 0usize;
        for ((t, u), a) in run
            .sh
            .times
            .iter()
            .zip(&run.sh.snapshots)
            .zip(&run.gl.snapshots)
        {
            if *t >= config.t_burn {
                sum += sup_c0_difference(u, a)?;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::Config("window too short for any samples".into()));
        }
        Ok(Some(sum / count as f64))
    })?;
    ScalingResult::from_samples(
        per_eps,
        SLOPE_TARGET,
        SLOPE_THRESHOLD,
        aborted,
        MAX_ABORT_FRACTION,
        config.seed,
    )
}

/// One rung of the semigroup-difference table.
#[derive(Debug, Clone, Serialize)]
pub struct HtEpsRow {
    pub eps: f64,
    /// `sup_t t^{(alpha+1)/2} ||H_t||_{H^alpha} / eps`.
    pub sup_alpha_scaled: f64,
    /// `sup_t sqrt(sum_k lambda_k^2 / (1 + k^2)) / sqrt(eps)`.
    pub sup_h1_c0_scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HtBoundsReport {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub per_eps: Vec<HtEpsRow>,
    /// Largest growth of the scaled quantities across successive ladder
    /// rungs; bounded (<= threshold) means the eps-scaling holds.
    pub max_ratio_alpha: f64,
    pub max_ratio_h1_c0: f64,
    pub threshold: f64,
    pub pass: bool,
}

const HT_ALPHA: f64 = 0.75;
const HT_RATIO_THRESHOLD: f64 = 2.0;

/// Deterministic table check of the semigroup-difference norms: both
/// normalized quantities must stay bounded as eps halves.
pub fn study_ht_bounds(config: &StudyConfig) -> Result<HtBoundsReport> {
    config.validate()?;
    let n_times = 13;
    let times: Vec<f64> = (0..n_times)
        .map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / (n_times - 1) as f64))
        .collect();
    let mut per_eps = Vec::new();
    for &eps in &config.eps_ladder {
        let d = config.domain_for(eps)?;
        let mut sup_alpha = 0.0_f64;
        let mut sup_h1 = 0.0_f64;
        for &t in &times {
            let (_, norms) = h_operator(t, d, HT_ALPHA)?;
            sup_alpha = sup_alpha.max(t.powf((HT_ALPHA + 1.0) / 2.0) * norms.op_alpha / eps);
            sup_h1 = sup_h1.max(norms.weighted_sq_sum.sqrt() / eps.sqrt());
        }
        per_eps.push(HtEpsRow {
            eps,
            sup_alpha_scaled: sup_alpha,
            sup_h1_c0_scaled: sup_h1,
        });
    }
    let max_ratio = |f: fn(&HtEpsRow) -> f64| {
        per_eps
            .windows(2)
            .map(|w| f(&w[1]) / f(&w[0]).max(1e-300))
            .fold(0.0, f64::max)
    };
    let max_ratio_alpha = max_ratio(|r| r.sup_alpha_scaled);
    let max_ratio_h1_c0 = max_ratio(|r| r.sup_h1_c0_scaled);
    let pass = max_ratio_alpha <= HT_RATIO_THRESHOLD && max_ratio_h1_c0 <= HT_RATIO_THRESHOLD;
    Ok(HtBoundsReport {
        alpha: HT_ALPHA,
        times,
        per_eps,
        max_ratio_alpha,
        max_ratio_h1_c0,
        threshold: HT_RATIO_THRESHOLD,
        pass,
    })
}
