use num_complex::Complex64;

use super::DomainSpec;
use crate::{Error, Result};

/// Which function space a field lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Real-valued field (solutions of the pattern equation); coefficients
    /// satisfy `c[-k] = conj(c[k])`.
    U,
    /// Complex-valued amplitude field.
    A,
}

/// A field as complex Fourier coefficients over `k in [-K, K]` in the basis
/// `e_k(x) = exp(i k pi x / L) / sqrt(2L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub coeffs: Vec<Complex64>,
    pub space: Space,
    pub domain: DomainSpec,
}

impl FourierField {
    pub fn zero(domain: DomainSpec, space: Space) -> Self {
        FourierField {
            coeffs: vec![Complex64::ZERO; domain.n_coeffs()],
            space,
            domain,
        }
    }

    /// Single basis mode `e_k`.
    pub fn basis_mode(domain: DomainSpec, space: Space, k: i64) -> Self {
        let mut f = Self::zero(domain, space);
        f.coeffs[domain.idx(k)] = Complex64::ONE;
        f
    }

    #[inline]
    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs[self.domain.idx(k)]
    }

    #[inline]
    pub fn set(&mut self, k: i64, v: Complex64) {
        let i = self.domain.idx(k);
        self.coeffs[i] = v;
    }

    /// Largest violation of the reality constraint `c[-k] = conj(c[k])`.
    pub fn reality_residue(&self) -> f64 {
        let k_max = self.domain.cutoff;
        let mut worst: f64 = self.get(0).im.abs();
        for k in 1..=k_max {
            let r = (self.get(-k) - self.get(k).conj()).norm();
            worst = worst.max(r);
        }
        worst
    }

    /// Checks the reality constraint against `tol`, scaled by the field size.
    pub fn check_real(&self, tol: f64) -> Result<()> {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        let residue = self.reality_residue();
        if residue > tol * scale {
            return Err(Error::NotReal {
                residue,
                tol: tol * scale,
            });
        }
        Ok(())
    }

    /// Enforces `c[-k] = conj(c[k])` by averaging mirror pairs; `c[0]` is
    /// projected onto the reals.
    pub fn symmetrize(&mut self) {
        let k_max = self.domain.cutoff;
        let i0 = self.domain.idx(0);
        self.coeffs[i0] = Complex64::new(self.coeffs[i0].re, 0.0);
        for k in 1..=k_max {
            let a = self.get(k);
            let b = self.get(-k);
            let avg = 0.5 * (a + b.conj());
            self.set(k, avg);
            self.set(-k, avg.conj());
        }
    }

    /// Squared coefficient sum `sum_k |c_k|^2` (no space convention applied).
    pub fn coeff_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    pub fn same_grid(&self, other: &FourierField) -> bool {
        self.domain.cutoff == other.domain.cutoff
            && self.domain.l == other.domain.l
            && self.domain.eps == other.domain.eps
    }
}
