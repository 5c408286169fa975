//! Rank-1 lattice point sets `x_k = {k z / N}` and the equal-weight QMC rule.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::lattice::{delta_n, GeneratingVector};
use crate::sum::NeumaierSum;

/// The `N` points of a rank-1 lattice, row-major (`points[k * d + j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePointSet {
    points: Vec<f64>,
    source: GeneratingVector,
}

impl LatticePointSet {
    /// Points in natural order `k = 0..N-1`, each coordinate computed as
    /// `(k z_j mod N) / N`.
    pub fn generate(z: &GeneratingVector) -> Self {
        let n = z.n();
        let d = z.d();
        let mask = n - 1;
        let nf = n as f64;
        let full = z.full();
        let mut points = vec![0.0; n as usize * d];
        points.par_chunks_mut(d).enumerate().for_each(|(k, row)| {
            for (x, &zj) in row.iter_mut().zip(full) {
                *x = ((k as u64).wrapping_mul(zj) & mask) as f64 / nf;
            }
        });
        Self { points, source: z.clone() }
    }

    pub fn len(&self) -> usize {
        self.source.n() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.source.d()
    }

    pub fn source(&self) -> &GeneratingVector {
        &self.source
    }

    pub fn point(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.points[k * d..(k + 1) * d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks(self.dim())
    }

    /// One row per point, `d` comma-separated columns, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for row in self.iter() {
            let mut first = true;
            for x in row {
                if !first {
                    out.write_all(b",")?;
                }
                first = false;
                write!(out, "{x:.16e}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn generate_points(z: &GeneratingVector) -> LatticePointSet {
    LatticePointSet::generate(z)
}

/// `Q_N(f) = (1/N) sum_k f(x_k)`, evaluated in point order. The first
/// callback error is returned.
pub fn qmc_estimate<F, E>(mut f: F, points: &LatticePointSet) -> Result<f64, E>
where
    F: FnMut(&[f64]) -> Result<f64, E>,
{
    let mut acc = NeumaierSum::new();
    for x in points.iter() {
        acc.add(f(x)?);
    }
    Ok(acc.value() / points.len() as f64)
}

/// Averages `e^{2 pi i l . x_k}` over the lattice (exactly, via residues)
/// and rounds: 1 iff `l` lies in the dual lattice.
pub fn character_check(l: &[i64], z: &GeneratingVector) -> u8 {
    assert_eq!(l.len(), z.d(), "frequency dimension mismatch");
    let n = z.n();
    let nn = n as i128;
    let r = l.iter().zip(z.full()).map(|(&lj, &zj)| lj as i128 * zj as i128).sum::<i128>().rem_euclid(nn) as u64;
    let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
    for k in 0..n {
        let phase = 2.0 * std::f64::consts::PI * ((k as u128 * r as u128) % n as u128) as f64 / n as f64;
        re.add(phase.cos());
        im.add(phase.sin());
    }
    let mean = (re.value().hypot(im.value())) / n as f64;
    let out = mean.round() as u8;
    debug_assert_eq!(out, delta_n(r as i128, n));
    out
}
