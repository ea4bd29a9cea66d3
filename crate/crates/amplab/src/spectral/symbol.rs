use super::DomainSpec;

/// Which linear operator a diagonal symbol represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// Full equation: `-1 - eps^{-2} (1 - (eps pi k / L)^2)^2`.
    Sh,
    /// Amplitude equation: `-1 - 4 (pi k / L - delta_eps)^2`.
    Gl,
    /// Full equation with a general even polynomial dispersion.
    GeneralizedSh,
    /// Amplitude equation attached to one zero of the dispersion.
    GlJ,
}

/// Diagonal symbol of a linear operator on the dense mode range `[-K, K]`.
#[derive(Debug, Clone)]
pub struct OperatorSymbol {
    pub kind: SymbolKind,
    pub domain: DomainSpec,
    /// `eigenvalues[domain.idx(k)]` is the (real) eigenvalue of mode `k`.
    pub eigenvalues: Vec<f64>,
}

impl OperatorSymbol {
    fn build(kind: SymbolKind, domain: DomainSpec, f: impl Fn(i64) -> f64) -> Self {
        let eigenvalues = (-domain.cutoff..=domain.cutoff).map(f).collect();
        OperatorSymbol {
            kind,
            domain,
            eigenvalues,
        }
    }

    /// `-1 - eps^{-2} (1 - (eps pi k / L)^2)^2` acting on u-space modes.
    pub fn sh(domain: DomainSpec) -> Self {
        let (l, eps) = (domain.l, domain.eps);
        Self::build(SymbolKind::Sh, domain, |k| {
            let z = eps * std::f64::consts::PI * k as f64 / l;
            -1.0 - (1.0 - z * z).powi(2) / (eps * eps)
        })
    }

    /// `-1 - 4 (pi k / L - delta_eps)^2` acting on a-space modes.
    pub fn gl(domain: DomainSpec) -> Self {
        let l = domain.l;
        let delta = domain.delta_eps;
        Self::build(SymbolKind::Gl, domain, |k| {
            let q = std::f64::consts::PI * k as f64 / l - delta;
            -1.0 - 4.0 * q * q
        })
    }

    /// `-1 - eps^{-2} P(k eps pi / L)` for a user-supplied even dispersion P.
    pub fn generalized_sh(domain: DomainSpec, p: impl Fn(f64) -> f64) -> Self {
        let (l, eps) = (domain.l, domain.eps);
        Self::build(SymbolKind::GeneralizedSh, domain, |k| {
            let z = eps * std::f64::consts::PI * k as f64 / l;
            -1.0 - p(z) / (eps * eps)
        })
    }

    /// `-1 - (P''(zeta_j)/2) (pi k / L - pi delta_j / L)^2`: the quadratic
    /// model of the dispersion near the zero `zeta_j`, with the carrier
    /// mismatch `delta_j` playing the role of `delta_eps`.
    pub fn gl_j(domain: DomainSpec, half_curv: f64, delta_j: f64) -> Self {
        let l = domain.l;
        Self::build(SymbolKind::GlJ, domain, |k| {
            let q = std::f64::consts::PI * (k as f64 - delta_j) / l;
            -1.0 - half_curv * q * q
        })
    }

    pub fn eigenvalue(&self, k: i64) -> f64 {
        self.eigenvalues[self.domain.idx(k)]
    }

    /// Largest eigenvalue over the band (all are real and typically < 0).
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_domain;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn sh_spot_value() {
        // L = pi, eps = 0.1, k = 11: z = 1.1, -1 - 100 (1 - 1.21)^2 = -5.41.
        let d = make_domain(PI, 0.1, 64).unwrap();
        let s = OperatorSymbol::sh(d);
        assert_abs_diff_eq!(s.eigenvalue(11), -5.41, epsilon = 1e-12);
    }

    #[test]
    fn sh_critical_mode_when_delta_vanishes() {
        // L = pi, eps = 0.1: N = 10, delta = 0, so k = +-N sits exactly on
        // the critical circle and the symbol equals -1 there.
        let d = make_domain(PI, 0.1, 64).unwrap();
        assert_eq!(d.delta_eps, 0.0);
        let s = OperatorSymbol::sh(d);
        assert_abs_diff_eq!(s.eigenvalue(d.n_eps), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalue(-d.n_eps), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.max_eigenvalue(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn gl_spot_values() {
        let d = make_domain(PI, 0.1, 64).unwrap();
        let s = OperatorSymbol::gl(d);
        assert_abs_diff_eq!(s.eigenvalue(0), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalue(2), -1.0 - 16.0, epsilon = 1e-12);
        // Nonzero detuning shifts the parabola's center to delta L / pi.
        let d2 = make_domain(1.0, 0.3, 16).unwrap();
        let s2 = OperatorSymbol::gl(d2);
        let delta = 1.0 / 0.3 - PI;
        assert_abs_diff_eq!(
            s2.eigenvalue(1),
            -1.0 - 4.0 * (PI - delta).powi(2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn generalized_sh_reduces_to_sh() {
        let d = make_domain(2.0 * PI, 0.2, 40).unwrap();
        let a = OperatorSymbol::sh(d);
        let b = OperatorSymbol::generalized_sh(d, |z| (1.0 - z * z).powi(2));
        for k in -d.cutoff..=d.cutoff {
            assert_abs_diff_eq!(a.eigenvalue(k), b.eigenvalue(k), epsilon = 1e-9);
        }
    }

    #[test]
    fn gl_j_reduces_to_gl_for_the_standard_dispersion() {
        // P(z) = (1 - z^2)^2 has P''(1) = 8, so half the curvature is 4 and
        // the attached amplitude symbol matches the plain one when the
        // carrier mismatch is delta_eps L / pi.
        let d = make_domain(1.0, 0.3, 16).unwrap();
        let a = OperatorSymbol::gl(d);
        let b = OperatorSymbol::gl_j(d, 4.0, d.delta_eps * d.l / PI);
        for k in -d.cutoff..=d.cutoff {
            assert_abs_diff_eq!(a.eigenvalue(k), b.eigenvalue(k), epsilon = 1e-9);
        }
    }
}
