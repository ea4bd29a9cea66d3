use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{DomainSpec, FourierField, Space};
use crate::{Error, Result};

/// Oversampling factor of the physical grid used for sup- and Lp-norms.
pub const C0_OVERSAMPLE: usize = 4;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn run_fft(buf: &mut [Complex64], inverse: bool) {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        let plan = cache
            .entry((buf.len(), inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(buf.len())
                } else {
                    planner.plan_fft_forward(buf.len())
                }
            })
            .clone();
        plan.process(buf);
    });
}

/// Smallest power of two holding `factor` copies of the coefficient band.
pub fn grid_size(cutoff: i64, factor: usize) -> usize {
    (factor * (2 * cutoff as usize + 1)).next_power_of_two()
}

#[inline]
fn parity_sign(k: i64) -> f64 {
    if k & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Evaluates the field at the `m` uniform grid points `x_j = -L + 2L j / m`.
///
/// With `e_k(x_j) = (-1)^k exp(2 pi i j k / m) / sqrt(2L)` this is a plain
/// inverse DFT after a parity twiddle.
pub fn eval_on_grid(field: &FourierField, m: usize) -> Result<Vec<Complex64>> {
    let k_max = field.domain.cutoff;
    if m < field.domain.n_coeffs() {
        return Err(Error::SizeMismatch(format!(
            "grid of {m} points cannot hold {} coefficients",
            field.domain.n_coeffs()
        )));
    }
    let norm = 1.0 / (2.0 * field.domain.l).sqrt();
    let mut buf = vec![Complex64::ZERO; m];
    for k in -k_max..=k_max {
        let bin = k.rem_euclid(m as i64) as usize;
        buf[bin] = field.get(k) * (parity_sign(k) * norm);
    }
    run_fft(&mut buf, true);
    Ok(buf)
}

/// Recovers coefficients over `[-K, K]` from values on the `m`-point grid.
/// Exact inverse of [`eval_on_grid`] when the field is band-limited to `K`.
pub fn field_from_grid(
    values: &[Complex64],
    domain: DomainSpec,
    space: Space,
) -> Result<FourierField> {
    let m = values.len();
    if m < domain.n_coeffs() {
        return Err(Error::SizeMismatch(format!(
            "grid of {m} points cannot resolve {} coefficients",
            domain.n_coeffs()
        )));
    }
    let mut buf = values.to_vec();
    run_fft(&mut buf, false);
    let scale = (2.0 * domain.l).sqrt() / m as f64;
    let mut field = FourierField::zero(domain, space);
    for k in -domain.cutoff..=domain.cutoff {
        let bin = k.rem_euclid(m as i64) as usize;
        field.set(k, buf[bin] * (parity_sign(k) * scale));
    }
    Ok(field)
}

fn pseudospectral<F>(field: &FourierField, op: F) -> Result<FourierField>
where
    F: Fn(Complex64) -> Complex64,
{
    // Factor-2 padding of the 2K+1 band gives >= 4K+2 grid points, enough for
    // an alias-free truncated cubic.
    let m = grid_size(field.domain.cutoff, 2);
    let mut vals = eval_on_grid(field, m)?;
    for v in &mut vals {
        *v = op(*v);
    }
    field_from_grid(&vals, field.domain, field.space)
}

/// Pointwise cube `u^3`, dealiased by padded pseudospectral evaluation and
/// truncation back to `[-K, K]`.
pub fn dealiased_cube(field: &FourierField) -> Result<FourierField> {
    pseudospectral(field, |v| v * v * v)
}

/// Pointwise `|A|^2 A`, dealiased the same way.
pub fn dealiased_modulus_sq_times(field: &FourierField) -> Result<FourierField> {
    pseudospectral(field, |v| v * v.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_domain;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use std::f64::consts::PI;

    fn random_field(domain: DomainSpec, space: Space, rng: &mut impl Rng) -> FourierField {
        let mut f = FourierField::zero(domain, space);
        for i in 0..f.coeffs.len() {
            f.coeffs[i] = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
        if space == Space::U {
            f.symmetrize();
        }
        f
    }

    #[test]
    fn round_trip_identity() {
        let domain = make_domain(PI, 0.2, 24).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for &space in &[Space::A, Space::U] {
            let f = random_field(domain, space, &mut rng);
            let m = grid_size(domain.cutoff, 2);
            let vals = eval_on_grid(&f, m).unwrap();
            let g = field_from_grid(&vals, domain, space).unwrap();
            let err: f64 = f
                .coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 10.0 * f64::EPSILON * domain.cutoff as f64);
        }
    }

    #[test]
    fn parseval_unitarity() {
        let domain = make_domain(2.0 * PI, 0.3, 16).unwrap();
        let mut rng = StdRng::seed_from_u64(8);
        let f = random_field(domain, Space::A, &mut rng);
        let m = grid_size(domain.cutoff, 2);
        let vals = eval_on_grid(&f, m).unwrap();
        let dx = 2.0 * domain.l / m as f64;
        let grid_l2: f64 = vals.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
        let coeff_l2 = f.coeff_norm_sq();
        assert_abs_diff_eq!(grid_l2, coeff_l2, epsilon = 1e-12 * coeff_l2);
    }

    #[test]
    fn equal_coefficients_make_delta_comb() {
        // All coefficients equal -> physical mass concentrates at x = 0
        // (every e_k equals 1/sqrt(2L) there), the Dirichlet-kernel peak.
        let domain = make_domain(PI, 0.2, 16).unwrap();
        let mut f = FourierField::zero(domain, Space::A);
        for c in &mut f.coeffs {
            *c = Complex64::ONE;
        }
        let m = grid_size(domain.cutoff, 2);
        let vals = eval_on_grid(&f, m).unwrap();
        let expected_peak = domain.n_coeffs() as f64 / (2.0 * domain.l).sqrt();
        assert_abs_diff_eq!(vals[m / 2].re, expected_peak, epsilon = 1e-9);
        let max_rest = vals
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != m / 2)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(max_rest < expected_peak);
    }

    #[test]
    fn single_mode_cube_lands_on_triple_wavenumber() {
        let domain = make_domain(PI, 0.2, 16).unwrap();
        let f = FourierField::basis_mode(domain, Space::A, 2);
        let cube = dealiased_cube(&f).unwrap();
        // e_2^3 = e_6 / (2L): cube of exp(2 i pi x / L)/sqrt(2L).
        let expected = 1.0 / (2.0 * domain.l);
        for k in -domain.cutoff..=domain.cutoff {
            let c = cube.get(k);
            if k == 6 {
                assert_abs_diff_eq!(c.re, expected, epsilon = 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dealiasing_discards_out_of_band_products() {
        // A mode at k = K: naive cubing on a 2K+1 grid would alias 3K back
        // into band; the padded product must leave the band empty instead.
        let domain = make_domain(PI, 0.2, 16).unwrap();
        let f = FourierField::basis_mode(domain, Space::A, domain.cutoff);
        let cube = dealiased_cube(&f).unwrap();
        assert!(cube.coeff_norm_sq() < 1e-24);
    }
}
