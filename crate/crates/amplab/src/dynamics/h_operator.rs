use crate::spectral::DomainSpec;
use crate::{Error, Result};

/// Diagonal-estimate norms of the semigroup-difference operator.
#[derive(Debug, Clone, Copy)]
pub struct HtNorms {
    /// `max_{|m| <= N} |lambda_m(t)| (1 + |m|)^alpha`: the plain-to-H^alpha
    /// operator norm of the diagonal map over the carrier window. The max
    /// is restricted to `|m| <= N_eps` because the folded modes near
    /// `m = -2N` map onto the conjugate carrier `e_{-N}`, where the full
    /// semigroup decays at rate 1 while the amplitude one decays at rate
    /// `~1/eps^2`; there `|lambda_m| = O(1)` and no `eps` scaling can hold.
    pub op_alpha: f64,
    /// `sum_m |lambda_m(t)|^2 / (1 + m^2)`: the weighted square sum behind
    /// the H^1-dual bound.
    pub weighted_sq_sum: f64,
}

/// Per-mode gap between the two semigroups in the amplitude index `m`
/// (full-equation mode `m + N`),
/// `lambda_m(t) = e^{-t (1 + (1/eps^2)(1 - (eps pi / L)^2 (m + N)^2)^2)}
///              - e^{-t (1 + 4 (m pi / L - delta)^2)}`,
/// over `m` in `[-K, K]`, together with its diagonal norm estimates. The
/// two exponents agree to O(eps) near `m = 0`, which is where the weights
/// are largest, so both norms vanish with eps.
pub fn h_operator(t: f64, domain: DomainSpec, alpha: f64) -> Result<(Vec<f64>, HtNorms)> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Config(format!("need t >= 0, got {t}")));
    }
    let (l, eps, n) = (domain.l, domain.eps, domain.n_eps as f64);
    let pi = std::f64::consts::PI;
    let mut lambda = Vec::with_capacity(domain.n_coeffs());
    let mut op_alpha = 0.0_f64;
    let mut weighted = 0.0_f64;
    for m in -domain.cutoff..=domain.cutoff {
        let mf = m as f64;
        let full = mf + n;
        let a = 1.0 + (1.0 - (eps * pi / l).powi(2) * full * full).powi(2) / (eps * eps);
        let b = 1.0 + 4.0 * (mf * pi / l - domain.delta_eps).powi(2);
        let lam = (-t * a).exp() - (-t * b).exp();
        lambda.push(lam);
        if m.abs() <= domain.n_eps {
            op_alpha = op_alpha.max(lam.abs() * (1.0 + mf.abs()).powf(alpha));
        }
        weighted += lam * lam / (1.0 + mf * mf);
    }
    Ok((
        lambda,
        HtNorms {
            op_alpha,
            weighted_sq_sum: weighted,
        },
    ))
}
