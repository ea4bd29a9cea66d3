use num_complex::Complex64;

use super::{eval_on_grid, grid_size, FourierField, Space, C0_OVERSAMPLE};
use crate::{Error, Result};

/// Norm selector for [`norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// L2 with the convention that u-space carries the 1/2 factor.
    L2,
    /// Fractional Sobolev norm `(sum (1+|k|)^{2a} |A_k|^2)^{1/2}`; u-space
    /// fields are injected first (`||u||_a = ||iota u||_a`).
    HAlpha(f64),
    /// Sup norm on an oversampled physical grid.
    C0,
    /// Lp norm on an oversampled physical grid.
    Lp(f64),
}

/// Projection `pi_eps: H_a -> H_u`, `(pi A)(x) = 2 Re(A(x) e^{i pi N x / L})`.
///
/// In coefficient space mode `m` contributes `A_m` to u-mode `m + N` and
/// `conj(A_m)` to u-mode `-(m + N)`. A nonzero coefficient whose shifted
/// index leaves `[-K, K]` is an error naming the cutoff that would fit.
pub fn project_pi(a: &FourierField) -> Result<FourierField> {
    let domain = a.domain;
    let n = domain.n_eps;
    let k_max = domain.cutoff;
    let mut u = FourierField::zero(domain, Space::U);
    for m in -k_max..=k_max {
        let c = a.get(m);
        if c == Complex64::ZERO {
            continue;
        }
        let shifted = m + n;
        if shifted.abs() > k_max {
            return Err(Error::ShiftOutOfRange {
                mode: m,
                shifted,
                cutoff: k_max,
                needed: shifted.abs(),
            });
        }
        let i_pos = domain.idx(shifted);
        let i_neg = domain.idx(-shifted);
        u.coeffs[i_pos] += c;
        u.coeffs[i_neg] += c.conj();
    }
    Ok(u)
}

/// Injection `iota_eps: H_u -> H_a`: keep the positive half `u_+` (half
/// weight on the zero mode) and shift all indices by `-N_eps`.
pub fn inject_iota(u: &FourierField) -> Result<FourierField> {
    u.check_real(1e-9)?;
    let domain = u.domain;
    let n = domain.n_eps;
    let k_max = domain.cutoff;
    let mut a = FourierField::zero(domain, Space::A);
    for k in 0..=k_max {
        let target = k - n;
        if target.abs() > k_max {
            continue; // u has no mass there; nothing to carry
        }
        let c = if k == 0 {
            0.5 * Complex64::new(u.get(0).re, 0.0)
        } else {
            u.get(k)
        };
        a.set(target, c);
    }
    Ok(a)
}

/// Band projection: zeroes all modes with `|k| > cutoff`, or `|k| <= cutoff`
/// when `complement` is set. The two projections sum to the identity.
pub fn band_project(f: &FourierField, cutoff: f64, complement: bool) -> FourierField {
    let mut out = f.clone();
    let k_max = f.domain.cutoff;
    for k in -k_max..=k_max {
        let inside = (k as f64).abs() <= cutoff;
        if inside == complement {
            out.set(k, Complex64::ZERO);
        }
    }
    out
}

/// Norm of a field under this crate's conventions (see [`NormKind`]).
pub fn norm(f: &FourierField, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::L2 => {
            let s = f.coeff_norm_sq();
            Ok(match f.space {
                Space::U => (0.5 * s).sqrt(),
                Space::A => s.sqrt(),
            })
        }
        NormKind::HAlpha(alpha) => {
            let a;
            let field = match f.space {
                Space::A => f,
                Space::U => {
                    a = inject_iota(f)?;
                    &a
                }
            };
            let k_max = field.domain.cutoff;
            let mut s = 0.0;
            for k in -k_max..=k_max {
                let w = (1.0 + (k as f64).abs()).powf(2.0 * alpha);
                s += w * field.get(k).norm_sqr();
            }
            Ok(s.sqrt())
        }
        NormKind::C0 => {
            let m = grid_size(f.domain.cutoff, C0_OVERSAMPLE);
            let vals = eval_on_grid(f, m)?;
            Ok(vals.iter().map(|v| v.norm()).fold(0.0, f64::max))
        }
        NormKind::Lp(p) => {
            if p < 1.0 {
                return Err(Error::Unsupported(format!("Lp norm needs p >= 1, got {p}")));
            }
            let m = grid_size(f.domain.cutoff, C0_OVERSAMPLE);
            let vals = eval_on_grid(f, m)?;
            let dx = 2.0 * f.domain.l / m as f64;
            let s: f64 = vals.iter().map(|v| v.norm().powf(p)).sum::<f64>() * dx;
            Ok(s.powf(1.0 / p))
        }
    }
}
