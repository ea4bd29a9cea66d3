use num_complex::Complex64;

use super::{EquationTag, SDEParams, TrajectoryRecord};
use crate::noise::{
    coupled_increments, sample_increments, CouplingMap, WienerStream,
};
use crate::spectral::{
    band_project, dealiased_cube, dealiased_modulus_sq_times, norm, FourierField, NormKind,
    OperatorSymbol, Space,
};
use crate::{Error, Result};

/// `phi1(z) = (e^z - 1) / z`, with the series near zero.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 + z / 2.0 + z * z / 6.0
    } else {
        z.exp_m1() / z
    }
}

/// Standard deviation of the exact one-step OU noise integral driven by a
/// unit-variance increment: `sqrt((1 - e^{2 lambda h}) / (-2 lambda))`,
/// continued by `sqrt(h)` at `lambda = 0`.
pub fn ou_noise_gain(lambda: f64, h: f64) -> f64 {
    let z = 2.0 * lambda * h;
    if z.abs() < 1e-8 {
        (h * (1.0 + 0.5 * z)).sqrt()
    } else {
        (z.exp_m1() / (2.0 * lambda)).sqrt()
    }
}

/// Independent complex increments on every mode (no reality constraint);
/// used for the amplitude equation when it runs on its own.
pub fn sample_increments_free(
    stream: &mut WienerStream,
    domain: crate::spectral::DomainSpec,
    h: f64,
) -> Vec<Complex64> {
    let sqrt_h = h.sqrt();
    (0..domain.n_coeffs())
        .map(|_| sqrt_h * stream.next_complex_std())
        .collect()
}

fn nonlinearity(state: &FourierField, params: &SDEParams) -> Result<FourierField> {
    let mut n = if params.cubic == 0.0 {
        FourierField::zero(state.domain, state.space)
    } else {
        let mut cube = match state.space {
            Space::U => dealiased_cube(state)?,
            Space::A => dealiased_modulus_sq_times(state)?,
        };
        cube.scale(-params.cubic);
        cube
    };
    for (c, s) in n.coeffs.iter_mut().zip(&state.coeffs) {
        *c += params.nu_tilde * s;
    }
    Ok(n)
}

/// One exponential-Euler step of the mild formulation. `increments` are
/// Wiener increments of variance `amplitude^2 h` per mode; the exact
/// one-step OU variance is applied by rescaling them with
/// `ou_noise_gain / sqrt(h)`.
pub fn step(
    state: &FourierField,
    params: &SDEParams,
    symbol: &OperatorSymbol,
    h: f64,
    increments: Option<&[Complex64]>,
) -> Result<FourierField> {
    if state.domain != symbol.domain {
        return Err(Error::GridMismatch(
            "state and symbol live on different domains".into(),
        ));
    }
    if let Some(dw) = increments {
        if dw.len() != state.coeffs.len() {
            return Err(Error::SizeMismatch(format!(
                "{} increments for {} modes",
                dw.len(),
                state.coeffs.len()
            )));
        }
    }
    let n = nonlinearity(state, params)?;
    let sqrt_h = h.sqrt();
    let mut out = FourierField::zero(state.domain, state.space);
    for i in 0..out.coeffs.len() {
        let lambda = symbol.eigenvalues[i];
        let z = h * lambda;
        let mut v = z.exp() * state.coeffs[i] + h * phi1(z) * n.coeffs[i];
        if let Some(dw) = increments {
            v += (ou_noise_gain(lambda, h) / sqrt_h) * dw[i];
        }
        out.coeffs[i] = v;
    }
    if let Some(band) = params.band_limit {
        out = band_project(&out, band as f64, false);
    }
    Ok(out)
}

/// Cheap upper bound on the sup norm: `sum |c_k| / sqrt(2L)`.
fn c0_upper_bound(f: &FourierField) -> f64 {
    f.coeffs.iter().map(|c| c.norm()).sum::<f64>() / (2.0 * f.domain.l).sqrt()
}

const BLOWUP_C0: f64 = 1e3;

fn blowup_check(f: &FourierField, t: f64) -> Result<()> {
    let bound = c0_upper_bound(f);
    if !bound.is_finite() {
        return Err(Error::BlowUp { t, norm: bound });
    }
    if bound > BLOWUP_C0 {
        let c0 = norm(f, NormKind::C0)?;
        if c0 > BLOWUP_C0 {
            return Err(Error::BlowUp { t, norm: c0 });
        }
    }
    Ok(())
}

/// Iterate [`step`] up to `t_final`, recording every `stride`-th state
/// (and the initial one). `noise` supplies a stream and per-mode noise
/// amplitudes; reality-constrained increments are drawn in u-space and
/// free complex ones in a-space.
pub fn simulate(
    initial: &FourierField,
    params: &SDEParams,
    symbol: &OperatorSymbol,
    tag: EquationTag,
    t_final: f64,
    h: f64,
    mut noise: Option<(&mut WienerStream, &[f64])>,
    stride: usize,
) -> Result<TrajectoryRecord> {
    if t_final <= 0.0 || h <= 0.0 || stride == 0 {
        return Err(Error::Config(format!(
            "need t_final > 0, h > 0, stride > 0 (got {t_final}, {h}, {stride})"
        )));
    }
    let n_steps = (t_final / h).round() as usize;
    let mut state = initial.clone();
    let mut times = vec![0.0];
    let mut snapshots = vec![state.clone()];
    let seed = noise.as_ref().map_or(0, |(s, _)| s.seed);
    for j in 0..n_steps {
        let dw = match noise.as_mut() {
            Some((stream, amps)) => {
                let raw = match state.space {
                    Space::U => sample_increments(&mut **stream, state.domain, h),
                    Space::A => sample_increments_free(&mut **stream, state.domain, h),
                };
                Some(
                    raw.iter()
                        .zip(amps.iter())
                        .map(|(dw, a)| a * dw)
                        .collect::<Vec<_>>(),
                )
            }
            None => None,
        };
        state = step(&state, params, symbol, h, dw.as_deref())?;
        let t = (j + 1) as f64 * h;
        blowup_check(&state, t)?;
        if (j + 1) % stride == 0 {
            times.push(t);
            snapshots.push(state.clone());
        }
    }
    let rec = TrajectoryRecord {
        tag,
        times,
        snapshots,
        seed,
        h: h * stride as f64,
        domain: initial.domain,
    };
    rec.validate()?;
    Ok(rec)
}

/// Lockstep run of both equations from one increment source, so the
/// matched modes consume identical noise. Optionally accumulates the full
/// equation's stochastic convolution from the same increments, which is
/// what the residual needs.
pub struct CoupledTrajectories {
    pub sh: TrajectoryRecord,
    pub gl: TrajectoryRecord,
    pub sh_convolution: Option<TrajectoryRecord>,
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_coupled(
    u0: &FourierField,
    a0: &FourierField,
    nu: f64,
    map: &CouplingMap,
    t_final: f64,
    h: f64,
    stream: &mut WienerStream,
    stride: usize,
    record_convolution: bool,
) -> Result<CoupledTrajectories> {
    let domain = map.domain;
    if u0.domain != domain || a0.domain != domain {
        return Err(Error::GridMismatch("initial data off the domain".into()));
    }
    if t_final <= 0.0 || h <= 0.0 || stride == 0 {
        return Err(Error::Config(format!(
            "need t_final > 0, h > 0, stride > 0 (got {t_final}, {h}, {stride})"
        )));
    }
    let params_sh = SDEParams::new(nu, 1.0, true)?;
    let params_gl = SDEParams::new(nu, 3.0, true)?.with_band_limit(domain.gl_band());
    let sym_sh = OperatorSymbol::sh(domain);
    let sym_gl = OperatorSymbol::gl(domain);
    let n_steps = (t_final / h).round() as usize;
    let sqrt_h = h.sqrt();

    let mut u = u0.clone();
    let mut a = band_project(a0, domain.gl_band() as f64, false);
    let mut w = FourierField::zero(domain, Space::U);
    let mut times = vec![0.0];
    let mut snaps_u = vec![u.clone()];
    let mut snaps_a = vec![a.clone()];
    let mut snaps_w = vec![w.clone()];
    for j in 0..n_steps {
        let (dw_sh, dw_gl) = coupled_increments(stream, map, h);
        u = step(&u, &params_sh, &sym_sh, h, Some(&dw_sh))?;
        a = step(&a, &params_gl, &sym_gl, h, Some(&dw_gl))?;
        if record_convolution {
            for i in 0..w.coeffs.len() {
                let lambda = sym_sh.eigenvalues[i];
                w.coeffs[i] = (h * lambda).exp() * w.coeffs[i]
                    + (ou_noise_gain(lambda, h) / sqrt_h) * dw_sh[i];
            }
        }
        let t = (j + 1) as f64 * h;
        blowup_check(&u, t)?;
        blowup_check(&a, t)?;
        if (j + 1) % stride == 0 {
            times.push(t);
            snaps_u.push(u.clone());
            snaps_a.push(a.clone());
            if record_convolution {
                snaps_w.push(w.clone());
            }
        }
    }
    let make = |tag, snapshots| TrajectoryRecord {
        tag,
        times: times.clone(),
        snapshots,
        seed: stream.seed,
        h: h * stride as f64,
        domain,
    };
    let sh = make(EquationTag::Sh, snaps_u);
    let gl = make(EquationTag::Gl, snaps_a);
    sh.validate()?;
    gl.validate()?;
    let sh_convolution = record_convolution.then(|| make(EquationTag::Sh, snaps_w));
    Ok(CoupledTrajectories {
        sh,
        gl,
        sh_convolution,
    })
}
