//! Reduced CBC-DBD construction of generating vectors for `N = 2^m`.
//!
//! Constructions are strategies behind [`Constructor`] and are looked up by
//! name in a [`ConstructorRegistry`]:
//!
//! * `reduced-fast`: digit-by-digit search using the stored u-vector,
//! * `reduced-slow`: the same search with direct quality evaluation,
//! * `baseline`: `reduced-fast` with all reduction indices zero.

mod quality;
mod ustate;

use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::lattice::{GeneratingVector, LatticeConfig};
use crate::reduction::ReductionIndices;
use crate::weights::WeightSequence;

pub use quality::{quality_h_fast, quality_h_reference};
pub use ustate::UState;

/// Everything a construction needs: configuration, `w_1..w_d` and
/// `gamma_1..gamma_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    config: LatticeConfig,
    w: Vec<u32>,
    gamma: Vec<f64>,
}

impl Problem {
    pub fn new(config: LatticeConfig, reduction: &ReductionIndices, weights: &WeightSequence) -> Result<Self> {
        let d = config.d();
        Self::from_values(config, reduction.values(d)?, weights.values(d)?)
    }

    pub fn from_values(config: LatticeConfig, w: Vec<u32>, gamma: Vec<f64>) -> Result<Self> {
        let d = config.d();
        if w.len() != d || gamma.len() != d {
            return Err(Error::InvalidConfig(format!(
                "dimension {d} needs {d} reduction indices and weights, got {} and {}",
                w.len(),
                gamma.len()
            )));
        }
        // Re-use the sequence checks for w_1 = 0 and monotonicity.
        ReductionIndices::explicit(w.clone())?;
        if let Some((j, g)) = gamma.iter().enumerate().find(|(_, g)| !(**g >= 0.0 && g.is_finite())) {
            return Err(Error::InvalidWeights(format!("gamma_{} = {g} is not a finite non-negative real", j + 1)));
        }
        Ok(Self { config, w, gamma })
    }

    pub fn config(&self) -> LatticeConfig {
        self.config
    }

    pub fn w(&self) -> &[u32] {
        &self.w
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Number of coordinates with `w_j < m`.
    pub fn d_star(&self) -> usize {
        self.w.iter().take_while(|&&w| w < self.config.m()).count()
    }

    fn with_zero_reduction(&self) -> Self {
        Self { config: self.config, w: vec![0; self.config.d()], gamma: self.gamma.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionResult {
    pub vector: GeneratingVector,
    /// Name of the constructor that produced the vector.
    pub method: &'static str,
    /// Multiply-accumulates in quality evaluations plus u-vector updates.
    pub op_count: u64,
    /// Seconds spent in the construction.
    pub wall_time: f64,
    /// `z_j` in binary, `max(1, m - w_j)` digits, most significant first.
    pub per_coordinate_bits: Vec<String>,
}

pub trait Constructor: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn construct(&self, problem: &Problem) -> Result<ConstructionResult>;
}

/// Choice between the two candidates of one digit. Ties go to 0.
fn pick(h0: f64, h1: f64) -> bool {
    h1 < h0
}

fn finish(
    problem: &Problem,
    method: &'static str,
    reduced: Vec<u64>,
    op_count: u64,
    started: Instant,
) -> Result<ConstructionResult> {
    let m = problem.config.m();
    let per_coordinate_bits = reduced
        .iter()
        .zip(&problem.w)
        .map(|(&z, &w)| format!("{z:0width$b}", width = m.saturating_sub(w).max(1) as usize))
        .collect();
    let vector = GeneratingVector::new(problem.config, problem.w.clone(), reduced)?;
    let wall_time = started.elapsed().as_secs_f64();
    log::debug!("{method}: m = {m}, d = {}, ops = {op_count}, {wall_time:.6}s", problem.config.d());
    Ok(ConstructionResult { vector, method, op_count, wall_time, per_coordinate_bits })
}

/// Fast reduced CBC-DBD: `O(sum_{j <= d*} (m - w_j) 2^m)` work, `O(2^m)` memory.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReducedFast;

impl ReducedFast {
    fn run(problem: &Problem, method: &'static str) -> Result<ConstructionResult> {
        let started = Instant::now();
        let m = problem.config.m();
        let (w, gamma) = (&problem.w, &problem.gamma);
        let mut reduced = vec![1u64; problem.config.d()];
        let mut state = UState::new(m);
        let mut ops = 0;
        for s in 1..=problem.d_star() {
            let ws = w[s - 1];
            let mut z = 1u64;
            for v in 2..=m - ws {
                if s > 1 {
                    let (h0, n0) = quality_h_fast(z, s, v, &state, w, gamma)?;
                    let (h1, n1) = quality_h_fast(z | 1 << (v - 1), s, v, &state, w, gamma)?;
                    ops += n0 + n1;
                    if pick(h0, h1) {
                        z |= 1 << (v - 1);
                    }
                }
                ops += state.apply_digit(ws, v, z, gamma[s - 1]);
            }
            state.finish_coordinate();
            reduced[s - 1] = z;
        }
        finish(problem, method, reduced, ops, started)
    }
}

impl Constructor for ReducedFast {
    fn name(&self) -> &'static str {
        "reduced-fast"
    }

    fn description(&self) -> &'static str {
        "reduced CBC-DBD with stored partial products"
    }

    fn construct(&self, problem: &Problem) -> Result<ConstructionResult> {
        Self::run(problem, self.name())
    }
}

/// Reference construction with nested-loop quality evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReducedSlow;

impl Constructor for ReducedSlow {
    fn name(&self) -> &'static str {
        "reduced-slow"
    }

    fn description(&self) -> &'static str {
        "reduced CBC-DBD, direct quality evaluation (reference)"
    }

    fn construct(&self, problem: &Problem) -> Result<ConstructionResult> {
        let started = Instant::now();
        let m = problem.config.m();
        let (w, gamma) = (&problem.w, &problem.gamma);
        let mut reduced = vec![1u64; problem.config.d()];
        let mut ops = 0u64;
        for s in 2..=problem.d_star() {
            let ws = w[s - 1];
            let mut z = 1u64;
            for v in 2..=m - ws {
                let h0 = quality_h_reference(z, s, v, &reduced, m, w, gamma)?;
                let h1 = quality_h_reference(z | 1 << (v - 1), s, v, &reduced, m, w, gamma)?;
                ops += 2 * s as u64 * ((1u64 << m) - (1u64 << (ws + v - 1)));
                if pick(h0, h1) {
                    z |= 1 << (v - 1);
                }
            }
            reduced[s - 1] = z;
        }
        finish(problem, self.name(), reduced, ops, started)
    }
}

/// Non-reduced CBC-DBD, realized as the fast algorithm with `w = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Baseline;

impl Constructor for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn description(&self) -> &'static str {
        "non-reduced CBC-DBD (all reduction indices zero)"
    }

    fn construct(&self, problem: &Problem) -> Result<ConstructionResult> {
        ReducedFast::run(&problem.with_zero_reduction(), self.name())
    }
}

pub struct ConstructorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Constructor>>,
}

impl ConstructorRegistry {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::new();
        r.register(ReducedFast);
        r.register(ReducedSlow);
        r.register(Baseline);
        r
    }

    /// Adds `c` under its name, replacing any previous entry.
    pub fn register<C: Constructor + 'static>(&mut self, c: C) {
        self.entries.insert(c.name(), Box::new(c));
    }

    pub fn get(&self, name: &str) -> Result<&dyn Constructor> {
        self.entries.get(name).map(|c| c.as_ref()).ok_or_else(|| {
            Error::InvalidConfig(format!("unknown construction method '{name}' (available: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Constructor> {
        self.entries.values().map(|c| c.as_ref())
    }
}

impl Default for ConstructorRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
