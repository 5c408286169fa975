//! Reduction indices `0 = w_1 <= w_2 <= ...`.
//!
//! Coordinate `j` of a reduced generating vector is an odd multiple of
//! `Y_j = 2^{w_j}`; coordinates with `w_j >= m` collapse to zero.

use num_bigint::BigUint;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ReductionIndices {
    /// `w_j = 0` for all `j` (no reduction).
    Zero,
    /// `w_j = floor(p * log2 j)`.
    Logarithmic { p: f64 },
    /// Explicit list, `w_1` first.
    Explicit(Vec<u32>),
}

impl ReductionIndices {
    pub fn logarithmic(p: f64) -> Result<Self> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::InvalidReduction(format!("logarithmic rate p must be >= 0, got {p}")));
        }
        Ok(Self::Logarithmic { p })
    }

    pub fn explicit(values: Vec<u32>) -> Result<Self> {
        if let Some(&first) = values.first() {
            if first != 0 {
                return Err(Error::InvalidReduction(format!("w_1 must be 0, got {first}")));
            }
        }
        if let Some(j) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidReduction(format!(
                "reduction indices must be non-decreasing: w_{} = {} > w_{} = {}",
                j + 1,
                values[j],
                j + 2,
                values[j + 1]
            )));
        }
        Ok(Self::Explicit(values))
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if let Self::Explicit(values) = self {
            if values.len() < d {
                return Err(Error::InvalidReduction(format!(
                    "explicit reduction list has {} entries but dimension is {d}",
                    values.len()
                )));
            }
        }
        Ok(())
    }

    /// `w_j` for a 1-based coordinate index.
    pub fn w(&self, j: usize) -> u32 {
        assert!(j >= 1, "coordinate indices start at 1");
        match self {
            Self::Zero => 0,
            Self::Logarithmic { p } => floor_p_log2(*p, j as u64),
            Self::Explicit(values) => values[j - 1],
        }
    }

    /// `w_1..w_d` (index 0 holds `w_1`).
    pub fn values(&self, d: usize) -> Result<Vec<u32>> {
        self.validate(d)?;
        Ok((1..=d).map(|j| self.w(j)).collect())
    }

    /// `d* = max{ j : w_j < m }` clamped to `d`.
    pub fn d_star(&self, m: u32, d: usize) -> usize {
        // w is non-decreasing and w_1 = 0 < m, so the answer is at least 1.
        let mut last = 0;
        for j in 1..=d {
            if self.w(j) >= m {
                break;
            }
            last = j;
        }
        last
    }

    /// Unclamped `d*`, or `None` when `w_j < m` for every `j` this sequence
    /// defines (zero reduction, `p = 0`, or an explicit list that never
    /// reaches `m`).
    pub fn d_star_unbounded(&self, m: u32) -> Option<usize> {
        match self {
            Self::Zero => None,
            Self::Logarithmic { p } if *p == 0.0 => None,
            Self::Logarithmic { .. } => {
                let mut j = 1;
                while self.w(j + 1) < m {
                    j += 1;
                }
                Some(j)
            }
            Self::Explicit(values) => values.iter().position(|&w| w >= m),
        }
    }
}

/// `floor(p * log2 j)` without floating-point trouble at powers of two.
///
/// When `p` is (numerically) a rational `a/b` with a small denominator the
/// result is `floor(floor(log2(j^a)) / b)`, evaluated on exact integers.
fn floor_p_log2(p: f64, j: u64) -> u32 {
    if j == 1 || p == 0.0 {
        return 0;
    }
    if let Some((a, b)) = small_rational(p) {
        if a <= 64 {
            let bits = BigUint::from(j).pow(a as u32).bits();
            return ((bits - 1) / b) as u32;
        }
    }
    (p * (j as f64).log2()).floor() as u32
}

fn small_rational(p: f64) -> Option<(u64, u64)> {
    (1..=64u64).find_map(|b| {
        let a = (p * b as f64).round();
        ((p * b as f64 - a).abs() < 1e-9 * b as f64).then_some((a as u64, b))
    })
}
