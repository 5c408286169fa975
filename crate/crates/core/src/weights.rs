//! Product weight sequences `gamma_1, gamma_2, ...`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `gamma_j = j^(-q)`.
    Polynomial { q: f64 },
    /// `gamma_j = c^j`.
    Geometric { c: f64 },
    /// `gamma_j` read from a list, index 1 first.
    Explicit(Vec<f64>),
}

/// A parametric product weight sequence with an optional exponent applied on
/// top (`gamma_j^power`), e.g. `gamma^alpha` for evaluation or
/// `gamma^(1/alpha)` for construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
    power: f64,
}

impl WeightSequence {
    pub fn polynomial(q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidWeights(format!("polynomial decay q must be > 0, got {q}")));
        }
        Ok(Self { kind: WeightKind::Polynomial { q }, power: 1.0 })
    }

    pub fn geometric(c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidWeights(format!("geometric base c must lie in (0,1), got {c}")));
        }
        Ok(Self { kind: WeightKind::Geometric { c }, power: 1.0 })
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidWeights(format!("weight gamma_{} = {v} is not a positive finite real", i + 1)));
        }
        Ok(Self { kind: WeightKind::Explicit(values), power: 1.0 })
    }

    /// Returns the sequence with its exponent multiplied by `p`.
    pub fn pow(&self, p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight exponent must be > 0, got {p}")));
        }
        Ok(Self { kind: self.kind.clone(), power: self.power * p })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Checks that `gamma_1..gamma_d` can be evaluated.
    pub fn validate(&self, d: usize) -> Result<()> {
        if let WeightKind::Explicit(values) = &self.kind {
            if values.len() < d {
                return Err(Error::InvalidWeights(format!(
                    "explicit weight list has {} entries but dimension is {d}",
                    values.len()
                )));
            }
        }
        Ok(())
    }

    /// `gamma_j` for a 1-based coordinate index.
    ///
    /// Panics if `j == 0` or if an explicit list does not reach `j`; call
    /// [`validate`](Self::validate) first.
    pub fn gamma(&self, j: usize) -> f64 {
        assert!(j >= 1, "coordinate indices start at 1");
        let base = match &self.kind {
            WeightKind::Polynomial { q } => (j as f64).powf(-q),
            WeightKind::Geometric { c } => c.powf(j as f64),
            WeightKind::Explicit(values) => values[j - 1],
        };
        if self.power == 1.0 {
            base
        } else {
            base.powf(self.power)
        }
    }

    /// `gamma_1..gamma_d` as a vector (index 0 holds `gamma_1`).
    pub fn values(&self, d: usize) -> Result<Vec<f64>> {
        self.validate(d)?;
        Ok((1..=d).map(|j| self.gamma(j)).collect())
    }
}

/// `gamma_u = prod_{j in u} gamma_j` with `gamma_{} = 1`.
///
/// `u` holds 1-based coordinate indices; `gamma[j - 1]` is `gamma_j`.
pub fn gamma_of_set(u: &[usize], gamma: &[f64]) -> f64 {
    u.iter().fold(1.0, |acc, &j| {
        assert!(j >= 1, "coordinate indices start at 1");
        acc * gamma[j - 1]
    })
}
