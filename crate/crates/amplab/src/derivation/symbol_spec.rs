use super::Poly;
use crate::spectral::{DomainSpec, OperatorSymbol};
use crate::{Error, Result};

/// An even dispersion polynomial plus the radius beyond which it must
/// dominate `z^2`.
#[derive(Debug, Clone)]
pub struct SymbolSpec {
    pub poly: Poly,
    pub r: f64,
    pub name: String,
}

impl SymbolSpec {
    pub fn new(poly: Poly, r: f64, name: impl Into<String>) -> Self {
        SymbolSpec {
            poly,
            r,
            name: name.into(),
        }
    }

    /// The standard dispersion `(1 - z^2)^2`.
    pub fn standard() -> Self {
        let z2 = Poly::z().mul(&Poly::z());
        let p = Poly::constant(1.0).add(&z2.neg()).pow(2);
        SymbolSpec::new(p, 2.0, "standard")
    }
}

/// Outcome of the admissibility checks on a dispersion polynomial.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub passed: bool,
    pub failures: Vec<String>,
    /// Positive zeros, ascending.
    pub zeros: Vec<f64>,
    /// `P''(zeta_j)` per zero.
    pub curvatures: Vec<f64>,
}

/// Positive zeros of a nonnegative polynomial: minima located by sign
/// changes of `P'` and refined by bisection, kept when `P` vanishes there.
fn positive_zeros(p: &Poly, z_max: f64) -> Vec<f64> {
    let dp = p.derivative();
    let n_grid = 4000;
    let mut zeros = Vec::new();
    let mut prev = dp.eval(1e-9);
    for i in 1..=n_grid {
        let z = z_max * i as f64 / n_grid as f64;
        let cur = dp.eval(z);
        if prev < 0.0 && cur >= 0.0 {
            // bracketed minimum of P
            let (mut lo, mut hi) = (z - z_max / n_grid as f64, z);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if dp.eval(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let zstar = 0.5 * (lo + hi);
            let scale = p.coeffs.iter().map(|c| c.abs()).sum::<f64>()
                * zstar.max(1.0).powi(p.degree() as i32);
            if p.eval(zstar).abs() <= 1e-9 * scale.max(1.0) {
                zeros.push(zstar);
            }
        }
        prev = cur;
    }
    zeros
}

/// Verify the structural assumptions on `P`:
/// even with `P >= 0` and `P(0) > 0`; finitely many zeros, all away from
/// the origin and nondegenerate (`P'' > 0`); `P(z) >= z^2` for `|z| >= R`.
pub fn check_assumptions(spec: &SymbolSpec) -> AssumptionReport {
    let p = &spec.poly;
    let mut failures = Vec::new();
    if !p.is_even() {
        failures.push("P must be even in z".to_string());
    }
    if p.degree() < 4 || *p.coeffs.last().unwrap() <= 0.0 {
        failures.push("P must have degree >= 4 with positive leading coefficient".to_string());
    }
    if p.eval(0.0) <= 0.0 {
        failures.push(format!("P(0) = {} must be positive", p.eval(0.0)));
    }
    let z_scan = spec.r.max(1.0) * 3.0;
    for i in 0..=6000 {
        let z = z_scan * i as f64 / 6000.0;
        if p.eval(z) < -1e-9 {
            failures.push(format!("P({z:.4}) = {:.3e} is negative", p.eval(z)));
            break;
        }
    }
    let zeros = positive_zeros(p, z_scan);
    let d2 = p.derivative().derivative();
    let curvatures: Vec<f64> = zeros.iter().map(|&z| d2.eval(z)).collect();
    for (&z, &c) in zeros.iter().zip(&curvatures) {
        if z < 1e-6 {
            failures.push("zero at the origin is excluded".to_string());
        }
        if c <= 0.0 {
            failures.push(format!("degenerate zero at {z:.6} (P'' = {c:.3e})"));
        }
    }
    if zeros.is_empty() {
        failures.push("P has no positive zeros".to_string());
    }
    // P(z) >= z^2 for |z| >= R, checked on a grid out to where the leading
    // term dominates all lower ones.
    for i in 0..=2000 {
        let z = spec.r + (3.0 * z_scan - spec.r) * i as f64 / 2000.0;
        if p.eval(z) < z * z {
            failures.push(format!("P({z:.4}) < z^2 beyond R = {}", spec.r));
            break;
        }
    }
    AssumptionReport {
        passed: failures.is_empty(),
        failures,
        zeros,
        curvatures,
    }
}

/// Default matched-band half width in `zeta` units: a quarter of the
/// smallest gap between signed zeros, additionally capped so the band
/// around the smallest zero cannot reach the origin.
pub fn default_band_radius(zeros: &[f64]) -> f64 {
    let mut signed: Vec<f64> = zeros.iter().flat_map(|&z| [z, -z]).collect();
    signed.sort_by(f64::total_cmp);
    let mut gap = f64::INFINITY;
    for w in signed.windows(2) {
        gap = gap.min(w[1] - w[0]);
    }
    let min_zero = zeros.iter().copied().fold(f64::INFINITY, f64::min);
    (gap / 4.0).min(min_zero / 2.0)
}

/// Quadratic model of the rescaled symbol near one zero, together with the
/// matched mode band.
#[derive(Debug, Clone)]
pub struct TaylorModel {
    pub zero_index: usize,
    pub zeta: f64,
    /// `P''(zeta_j) / 2`: the diffusion coefficient of the attached
    /// amplitude equation.
    pub half_curvature: f64,
    /// Band center in mode units, `L zeta_j / (eps pi)`.
    pub center: f64,
    pub band_radius: f64,
    /// Modes `k` with `|k eps pi / L - zeta_j| < r`.
    pub band: Vec<i64>,
    pub symbol: OperatorSymbol,
}

impl TaylorModel {
    /// `P_j^eps(k) = (P''(zeta_j) pi^2 / (2 L^2)) (k - center)^2 + 1`.
    pub fn p_eps(&self, k: i64, l: f64) -> f64 {
        let d = k as f64 - self.center;
        self.half_curvature * (std::f64::consts::PI / l).powi(2) * d * d + 1.0
    }
}

/// Build the quadratic model for zero `j`; `radius` falls back to
/// [`default_band_radius`], and overlapping bands are rejected.
pub fn taylor_model(
    spec: &SymbolSpec,
    zero_index: usize,
    domain: DomainSpec,
    radius: Option<f64>,
) -> Result<TaylorModel> {
    let report = check_assumptions(spec);
    if !report.passed {
        return Err(Error::AssumptionFailed(report.failures.join("; ")));
    }
    let zeros = &report.zeros;
    if zero_index >= zeros.len() {
        return Err(Error::Derivation(format!(
            "zero index {zero_index} out of range ({} zeros)",
            zeros.len()
        )));
    }
    let r_default = default_band_radius(zeros);
    let r = radius.unwrap_or(r_default);
    if r > r_default {
        return Err(Error::Derivation(format!(
            "band radius {r} makes bands overlap or reach the origin; \
             try r <= {r_default}"
        )));
    }
    let zeta = zeros[zero_index];
    let half_curvature = report.curvatures[zero_index] / 2.0;
    let center = domain.l * zeta / (domain.eps * std::f64::consts::PI);
    let band: Vec<i64> = (-domain.cutoff..=domain.cutoff)
        .filter(|&k| {
            (k as f64 * domain.eps * std::f64::consts::PI / domain.l - zeta).abs() < r
        })
        .collect();
    let symbol = OperatorSymbol::gl_j(domain, half_curvature, center);
    Ok(TaylorModel {
        zero_index,
        zeta,
        half_curvature,
        center,
        band_radius: r,
        band,
        symbol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::parse_poly;
    use crate::spectral::make_domain;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn standard_dispersion_passes() {
        let spec = SymbolSpec::standard();
        let rep = check_assumptions(&spec);
        assert!(rep.passed, "{:?}", rep.failures);
        assert_eq!(rep.zeros.len(), 1);
        assert_abs_diff_eq!(rep.zeros[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.curvatures[0], 8.0, epsilon = 1e-6);
    }

    #[test]
    fn two_zero_example_passes() {
        let p = parse_poly("(1 - z^2)^2 * (9 - z^2)^2").unwrap();
        let spec = SymbolSpec::new(p, 4.0, "two-zero");
        let rep = check_assumptions(&spec);
        assert!(rep.passed, "{:?}", rep.failures);
        assert_eq!(rep.zeros.len(), 2);
        assert_abs_diff_eq!(rep.zeros[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(rep.zeros[1], 3.0, epsilon = 1e-8);
    }

    #[test]
    fn zero_at_origin_is_rejected() {
        let p = parse_poly("z^2 * z^2").unwrap(); // z^4: zero only at 0
        let spec = SymbolSpec::new(p, 2.0, "origin");
        let rep = check_assumptions(&spec);
        assert!(!rep.passed);
    }

    #[test]
    fn odd_and_negative_polynomials_fail() {
        let spec = SymbolSpec::new(parse_poly("z^4 + z^3").unwrap(), 2.0, "odd");
        assert!(!check_assumptions(&spec).passed);
        let spec = SymbolSpec::new(parse_poly("(1 - z^2)^3").unwrap(), 2.0, "sign");
        assert!(!check_assumptions(&spec).passed);
    }

    #[test]
    fn band_radius_respects_gaps_and_origin() {
        // Signed zeros -3, -1, 1, 3: smallest gap 2, quarter gap 0.5;
        // origin cap is 1/2 as well.
        assert_abs_diff_eq!(default_band_radius(&[1.0, 3.0]), 0.5, epsilon = 1e-12);
        // Single zero at 1: signed gap 2 -> 0.5.
        assert_abs_diff_eq!(default_band_radius(&[1.0]), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(default_band_radius(&[2.0, 3.0]), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn taylor_model_matches_the_amplitude_diffusion() {
        let spec = SymbolSpec::standard();
        let d = make_domain(PI, 0.1, 64).unwrap();
        let tm = taylor_model(&spec, 0, d, None).unwrap();
        assert_abs_diff_eq!(tm.half_curvature, 4.0, epsilon = 1e-6);
        assert_abs_diff_eq!(tm.center, 10.0, epsilon = 1e-6);
        assert!(tm.band.contains(&10));
        assert!(!tm.band.contains(&0));
        // Band center: model is minimal and equals 1.
        let pc = tm.p_eps(10, d.l);
        assert_abs_diff_eq!(pc, 1.0, epsilon = 1e-9);
        for &k in &tm.band {
            assert!(tm.p_eps(k, d.l) >= pc - 1e-12);
        }
    }

    #[test]
    fn cubic_remainder_on_the_band() {
        // gamma_k - gamma_k^(j) should be O((eps / L^3) |k - center|^3)
        // on the band, with gamma the rescaled dispersion -1 - P/eps^2.
        let spec = SymbolSpec::standard();
        for eps in [0.1, 0.05] {
            let d = make_domain(PI, eps, (40.0 / eps) as i64 / 10).unwrap();
            let tm = taylor_model(&spec, 0, d, None).unwrap();
            let p = &spec.poly;
            for &k in &tm.band {
                let zeta = k as f64 * eps * PI / d.l;
                let gamma = -(1.0 + p.eval(zeta) / (eps * eps));
                let gamma_model = -tm.p_eps(k, d.l);
                let dk = (k as f64 - tm.center).abs();
                let bound = 200.0 * eps / d.l.powi(3) * dk.powi(3).max(1.0);
                assert!(
                    (gamma - gamma_model).abs() <= bound,
                    "eps={eps} k={k}: {} vs bound {bound}",
                    (gamma - gamma_model).abs()
                );
            }
        }
    }

    #[test]
    fn oversized_radius_is_rejected_with_a_hint() {
        let p = parse_poly("(1 - z^2)^2 * (9 - z^2)^2").unwrap();
        let spec = SymbolSpec::new(p, 4.0, "two-zero");
        let d = make_domain(PI, 0.1, 64).unwrap();
        match taylor_model(&spec, 0, d, Some(1.5)) {
            Err(Error::Derivation(msg)) => assert!(msg.contains("r <=")),
            other => panic!("expected derivation error, got {other:?}"),
        }
        assert!(taylor_model(&spec, 1, d, Some(0.4)).is_ok());
    }
}
