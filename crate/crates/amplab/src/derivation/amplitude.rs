use serde::Serialize;

use super::{check_assumptions, SymbolSpec};
use crate::noise::CorrelationSpec;
use crate::{Error, Result};

/// Supported cubic nonlinearities of the full equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Nonlinearity {
    /// `u^3`
    Cubic,
    /// `u (du/dx)^2`
    GradSquared,
}

/// Product of three amplitude factors `(zero index, conjugated)`, sorted.
pub type Monomial = [(usize, bool); 3];

#[derive(Debug, Clone, Serialize)]
pub struct CubicTerm {
    /// Which amplitude equation the term belongs to.
    pub target: usize,
    pub monomial: Monomial,
    /// Coefficient as it appears on the equation's right-hand side (the
    /// nonlinearity enters with a minus sign).
    pub coefficient: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeSystem {
    pub nonlinearity: Nonlinearity,
    /// Carrier wavenumbers `zeta_1 < ... < zeta_m`.
    pub zeros: Vec<f64>,
    /// Diffusion coefficients `P''(zeta_j) / 2`.
    pub diffusion: Vec<f64>,
    /// Multiplier of `nu_tilde` in each equation's linear term.
    pub linear: Vec<f64>,
    pub cubic_terms: Vec<CubicTerm>,
    /// Noise amplitude `sqrt(qhat(zeta_j))` per equation.
    pub noise_amp: Vec<f64>,
    /// Wavenumber relations that produced terms other than `A_l |A_i|^2`.
    pub resonances: Vec<String>,
}

impl AmplitudeSystem {
    pub fn term(&self, target: usize, monomial: Monomial) -> Option<f64> {
        self.cubic_terms
            .iter()
            .find(|t| t.target == target && t.monomial == monomial)
            .map(|t| t.coefficient)
    }

    /// Human-readable rendering of the coupled system.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (j, zeta) in self.zeros.iter().enumerate() {
            let _ = write!(
                out,
                "dA_{} = [{} d^2/dX^2 + nu_tilde] A_{}",
                j + 1,
                self.diffusion[j],
                j + 1
            );
            for t in self.cubic_terms.iter().filter(|t| t.target == j) {
                let mono: String = t
                    .monomial
                    .iter()
                    .map(|&(i, conj)| {
                        if conj {
                            format!(" conj(A_{})", i + 1)
                        } else {
                            format!(" A_{}", i + 1)
                        }
                    })
                    .collect();
                let _ = write!(
                    out,
                    " {} {}{}",
                    if t.coefficient < 0.0 { "-" } else { "+" },
                    t.coefficient.abs(),
                    mono
                );
            }
            let _ = writeln!(
                out,
                " + {} dW_{}   (carrier {})",
                self.noise_amp[j],
                j + 1,
                zeta
            );
        }
        out
    }
}

fn canonical(mut m: Monomial) -> Monomial {
    m.sort();
    m
}

/// Derive the coupled amplitude system attached to the zeros of `P`:
/// enumerate every ordered triple of signed carriers summing to a target
/// carrier and accumulate its weight (1 for `u^3`; minus the product of
/// the two differentiated carriers for `u (du)^2`). The right-hand-side
/// coefficient is the negative of the accumulated weight.
pub fn derive_amplitude_system(
    spec: &SymbolSpec,
    nonlinearity: Nonlinearity,
    corr: &CorrelationSpec,
) -> Result<AmplitudeSystem> {
    let report = check_assumptions(spec);
    if !report.passed {
        return Err(Error::AssumptionFailed(report.failures.join("; ")));
    }
    let zeros = report.zeros;
    let m = zeros.len();
    let tol = 1e-9 * zeros.iter().copied().fold(1.0, f64::max);
    // signed carriers: (zero index, sign)
    let carriers: Vec<(usize, f64)> = (0..m)
        .flat_map(|j| [(j, 1.0), (j, -1.0)])
        .collect();
    let mut terms: Vec<CubicTerm> = Vec::new();
    let mut resonances = Vec::new();
    for target in 0..m {
        let mut acc: std::collections::BTreeMap<Monomial, f64> = Default::default();
        for &(j1, s1) in &carriers {
            for &(j2, s2) in &carriers {
                for &(j3, s3) in &carriers {
                    let total = s1 * zeros[j1] + s2 * zeros[j2] + s3 * zeros[j3];
                    if (total - zeros[target]).abs() > tol {
                        continue;
                    }
                    let weight = match nonlinearity {
                        Nonlinearity::Cubic => 1.0,
                        Nonlinearity::GradSquared => -(s2 * zeros[j2]) * (s3 * zeros[j3]),
                    };
                    let mono = canonical([
                        (j1, s1 < 0.0),
                        (j2, s2 < 0.0),
                        (j3, s3 < 0.0),
                    ]);
                    *acc.entry(mono).or_insert(0.0) += weight;
                }
            }
        }
        for (mono, w) in acc {
            if w == 0.0 {
                continue;
            }
            // diagonal terms look like A_target |A_i|^2
            let is_diagonal = {
                let mut counts = mono.to_vec();
                counts.sort();
                (0..3).any(|i| {
                    let t = counts[i];
                    t == (target, false) && {
                        let rest: Vec<_> =
                            (0..3).filter(|&j| j != i).map(|j| counts[j]).collect();
                        rest[0].0 == rest[1].0 && rest[0].1 != rest[1].1
                    }
                })
            };
            if !is_diagonal {
                let relation: Vec<String> = mono
                    .iter()
                    .map(|&(j, conj)| {
                        format!("{}{}", if conj { "-" } else { "+" }, zeros[j])
                    })
                    .collect();
                resonances.push(format!(
                    "{} = {} (target A_{})",
                    relation.join(" "),
                    zeros[target],
                    target + 1
                ));
            }
            terms.push(CubicTerm {
                target,
                monomial: mono,
                coefficient: -w,
            });
        }
    }
    let diffusion = report.curvatures.iter().map(|c| c / 2.0).collect();
    let noise_amp = zeros.iter().map(|&z| corr.qhat(z).sqrt()).collect();
    Ok(AmplitudeSystem {
        nonlinearity,
        linear: vec![1.0; m],
        zeros,
        diffusion,
        cubic_terms: terms,
        noise_amp,
        resonances,
    })
}
