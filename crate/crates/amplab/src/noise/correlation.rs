use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CorrelationKind {
    /// `qhat == 1`.
    White,
    /// `qhat(z) = 1 / (1 + ell^2 z^2)`.
    Exponential { ell: f64 },
    /// Sampled spectral density, linearly interpolated in `|z|`.
    Table { points: Vec<(f64, f64)> },
}

/// Spatial correlation of the driving noise, described by its even,
/// nonnegative, bounded spectral density `qhat`.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationSpec {
    pub kind: CorrelationKind,
    pub lipschitz_bound: f64,
}

impl CorrelationSpec {
    pub fn white() -> Self {
        CorrelationSpec {
            kind: CorrelationKind::White,
            lipschitz_bound: 0.0,
        }
    }

    pub fn exponential(ell: f64) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::Config(format!(
                "exponential correlation length must be positive, got {ell}"
            )));
        }
        // max |d/dz 1/(1+l^2 z^2)| is attained at l z = 1/sqrt(3).
        let lip = 3.0 * 3.0_f64.sqrt() * ell / 8.0;
        Ok(CorrelationSpec {
            kind: CorrelationKind::Exponential { ell },
            lipschitz_bound: lip,
        })
    }

    /// Build from `(z, qhat(z))` samples with `z >= 0` strictly increasing.
    pub fn from_table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config(
                "correlation table needs at least two points".into(),
            ));
        }
        let mut lip = 0.0_f64;
        for (i, &(z, q)) in points.iter().enumerate() {
            if !z.is_finite() || !q.is_finite() {
                return Err(Error::Config(format!(
                    "correlation table entry {i} is not finite"
                )));
            }
            if q < 0.0 {
                return Err(Error::Config(format!(
                    "correlation table has negative density {q} at z = {z}"
                )));
            }
            if i == 0 {
                if z != 0.0 {
                    return Err(Error::Config(
                        "correlation table must start at z = 0".into(),
                    ));
                }
            } else {
                let (zp, qp) = points[i - 1];
                if z <= zp {
                    return Err(Error::Config(format!(
                        "correlation table abscissae must increase ({zp} then {z})"
                    )));
                }
                lip = lip.max(((q - qp) / (z - zp)).abs());
            }
        }
        Ok(CorrelationSpec {
            kind: CorrelationKind::Table { points },
            lipschitz_bound: lip,
        })
    }

    /// Load a two-column whitespace-separated text table (`z qhat`).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| {
                    Error::Config(format!(
                        "{}:{}: expected two columns",
                        path.display(),
                        lineno + 1
                    ))
                })?
                .parse()
                .map_err(|e| {
                    Error::Config(format!("{}:{}: {e}", path.display(), lineno + 1))
                })
            };
            let z = parse(cols.next())?;
            let q = parse(cols.next())?;
            points.push((z, q));
        }
        Self::from_table(points)
    }

    /// The spectral density, extended evenly: `qhat(z) = qhat(-z)`.
    pub fn qhat(&self, zeta: f64) -> f64 {
        let z = zeta.abs();
        match &self.kind {
            CorrelationKind::White => 1.0,
            CorrelationKind::Exponential { ell } => 1.0 / (1.0 + ell * ell * z * z),
            CorrelationKind::Table { points } => {
                let last = points.len() - 1;
                if z >= points[last].0 {
                    return points[last].1;
                }
                let j = points.partition_point(|&(zp, _)| zp <= z);
                let (z0, q0) = points[j - 1];
                let (z1, q1) = points[j];
                q0 + (q1 - q0) * (z - z0) / (z1 - z0)
            }
        }
    }
}
