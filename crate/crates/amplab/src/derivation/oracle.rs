use std::collections::BTreeMap;

use super::{Monomial, Nonlinearity};

/// A trigonometric polynomial with symbolic amplitudes: for each integer
/// wavenumber, an integer-coefficient polynomial over the amplitude
/// variables `(zero index, conjugated)`.
type TrigPoly = BTreeMap<i64, BTreeMap<Vec<(usize, bool)>, i64>>;

fn mul(a: &TrigPoly, b: &TrigPoly) -> TrigPoly {
    let mut out: TrigPoly = BTreeMap::new();
    for (wa, pa) in a {
        for (wb, pb) in b {
            let slot = out.entry(wa + wb).or_default();
            for (ma, ca) in pa {
                for (mb, cb) in pb {
                    let mut m = ma.clone();
                    m.extend_from_slice(mb);
                    m.sort();
                    *slot.entry(m).or_insert(0) += ca * cb;
                }
            }
        }
    }
    out
}

/// Exact cubic resonance coefficients, computed independently of the
/// enumeration in `derive_amplitude_system`: build
/// `u = sum_j (A_j e^{i zeta_j x} + conj(A_j) e^{-i zeta_j x})` as a
/// symbolic trigonometric polynomial over the integers, apply the
/// nonlinearity by full convolution (each derivative multiplies a term by
/// its wavenumber; the two `i` factors of the squared gradient contribute
/// a global `-1`), and read off the coefficient polynomial of
/// `e^{i zeta_l x}` for every target `l`. Carrier wavenumbers must be
/// integers so the arithmetic stays exact.
pub fn exact_cubic_coefficients(
    zeros: &[i64],
    nonlinearity: Nonlinearity,
) -> Vec<BTreeMap<Monomial, i64>> {
    let mut u: TrigPoly = BTreeMap::new();
    for (j, &z) in zeros.iter().enumerate() {
        u.entry(z).or_default().insert(vec![(j, false)], 1);
        u.entry(-z).or_default().insert(vec![(j, true)], 1);
    }
    let product = match nonlinearity {
        Nonlinearity::Cubic => mul(&mul(&u, &u), &u),
        Nonlinearity::GradSquared => {
            let mut du: TrigPoly = BTreeMap::new();
            for (&w, poly) in &u {
                let slot = du.entry(w).or_default();
                for (m, c) in poly {
                    slot.insert(m.clone(), c * w);
                }
            }
            let mut grad_sq = mul(&du, &du);
            for poly in grad_sq.values_mut() {
                for c in poly.values_mut() {
                    *c = -*c; // i^2 from the two d/dx factors
                }
            }
            mul(&u, &grad_sq)
        }
    };
    zeros
        .iter()
        .map(|&z| {
            product
                .get(&z)
                .map(|poly| {
                    poly.iter()
                        .filter(|&(_, &c)| c != 0)
                        .map(|(m, &c)| {
                            let mono: Monomial = [m[0], m[1], m[2]];
                            (mono, c)
                        })
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect()
}
