use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::{make_domain, DomainSpec, FourierField, Space};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"AMPL";
const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationTag {
    Sh,
    Gl,
}

impl EquationTag {
    pub fn space(self) -> Space {
        match self {
            EquationTag::Sh => Space::U,
            EquationTag::Gl => Space::A,
        }
    }
}

/// A simulated path: snapshots on a uniform time grid starting at 0.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub tag: EquationTag,
    pub times: Vec<f64>,
    pub snapshots: Vec<FourierField>,
    pub seed: u64,
    /// Integrator step (snapshots may be strided coarser).
    pub h: f64,
    pub domain: DomainSpec,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    tag: EquationTag,
    seed: u64,
    h: f64,
    cutoff: i64,
    l: f64,
    eps: f64,
    snapshots: usize,
}

impl TrajectoryRecord {
    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.snapshots.len() || self.times.is_empty() {
            return Err(Error::TrajectoryFile("times/snapshots mismatch".into()));
        }
        if self.times[0] != 0.0 {
            return Err(Error::TrajectoryFile("time grid must start at 0".into()));
        }
        if self.times.len() > 1 {
            let dt = self.times[1] - self.times[0];
            for w in self.times.windows(2) {
                if ((w[1] - w[0]) - dt).abs() > 1e-12 * dt.max(1.0) {
                    return Err(Error::TrajectoryFile("time grid not uniform".into()));
                }
            }
        }
        if self.tag == EquationTag::Sh {
            for (t, snap) in self.times.iter().zip(&self.snapshots) {
                if snap.reality_residue() > 1e-9 * (1.0 + snap.coeff_norm_sq().sqrt()) {
                    return Err(Error::TrajectoryFile(format!(
                        "reality invariant violated at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Write the binary snapshot file plus a JSON manifest alongside it.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.domain.cutoff.to_le_bytes())?;
        w.write_all(&self.domain.l.to_le_bytes())?;
        w.write_all(&self.domain.eps.to_le_bytes())?;
        w.write_all(&self.h.to_le_bytes())?;
        w.write_all(&[match self.tag {
            EquationTag::Sh => 0u8,
            EquationTag::Gl => 1u8,
        }])?;
        for (t, snap) in self.times.iter().zip(&self.snapshots) {
            w.write_all(&t.to_le_bytes())?;
            for c in &snap.coeffs {
                w.write_all(&c.re.to_le_bytes())?;
                w.write_all(&c.im.to_le_bytes())?;
            }
        }
        w.flush()?;
        let manifest = Manifest {
            tag: self.tag,
            seed: self.seed,
            h: self.h,
            cutoff: self.domain.cutoff,
            l: self.domain.l,
            eps: self.domain.eps,
            snapshots: self.snapshots.len(),
        };
        let mpath = path.with_extension("json");
        std::fs::write(&mpath, serde_json::to_string_pretty(&manifest)?)?;
        Ok(())
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::TrajectoryFile(format!(
                "{}: bad magic {:?}",
                path.display(),
                magic
            )));
        }
        let version = read_u16(&mut r)?;
        if version != VERSION {
            return Err(Error::TrajectoryFile(format!(
                "unsupported version {version}"
            )));
        }
        let cutoff = read_i64(&mut r)?;
        let l = read_f64(&mut r)?;
        let eps = read_f64(&mut r)?;
        let h = read_f64(&mut r)?;
        let mut tag_byte = [0u8; 1];
        r.read_exact(&mut tag_byte)?;
        let tag = match tag_byte[0] {
            0 => EquationTag::Sh,
            1 => EquationTag::Gl,
            b => return Err(Error::TrajectoryFile(format!("unknown tag byte {b}"))),
        };
        let domain = make_domain(l, eps, cutoff)?;
        let manifest: Manifest =
            serde_json::from_str(&std::fs::read_to_string(path.with_extension("json"))?)?;
        let n_coeffs = domain.n_coeffs();
        let mut times = Vec::new();
        let mut snapshots = Vec::new();
        loop {
            let mut buf = [0u8; 8];
            match r.read(&mut buf)? {
                0 => break,
                8 => {}
                _ => return Err(Error::TrajectoryFile("truncated snapshot".into())),
            }
            times.push(f64::from_le_bytes(buf));
            let mut snap = FourierField::zero(domain, tag.space());
            for i in 0..n_coeffs {
                let re = read_f64(&mut r)?;
                let im = read_f64(&mut r)?;
                snap.coeffs[i] = Complex64::new(re, im);
            }
            snapshots.push(snap);
        }
        let rec = TrajectoryRecord {
            tag,
            times,
            snapshots,
            seed: manifest.seed,
            h,
            domain,
        };
        rec.validate()?;
        Ok(rec)
    }
}

fn read_u16(r: &mut impl Read) -> Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_i64(r: &mut impl Read) -> Result<i64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(i64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
