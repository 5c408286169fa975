//! Lattice configuration, generating vectors and frequency windows.

use crate::error::{Error, Result};

/// Largest supported exponent; `u` vectors and tables hold `2^m` entries.
pub const MAX_M: u32 = 40;

/// `N = 2^m` points in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    m: u32,
    d: usize,
}

impl LatticeConfig {
    pub fn new(m: u32, d: usize) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidConfig(format!("m must lie in 1..={MAX_M}, got {m}")));
        }
        if d == 0 {
            return Err(Error::InvalidConfig("dimension d must be at least 1".into()));
        }
        Ok(Self { m, d })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `N = 2^m`.
    pub fn n(&self) -> u64 {
        1u64 << self.m
    }
}

/// Generating vector `z = (Y_1 z_1, ..., Y_d z_d)` of a rank-1 lattice rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingVector {
    config: LatticeConfig,
    w: Vec<u32>,
    reduced: Vec<u64>,
    full: Vec<u64>,
}

impl GeneratingVector {
    /// Builds a vector from reduced components and reduction indices,
    /// checking parity and range.
    pub fn new(config: LatticeConfig, w: Vec<u32>, reduced: Vec<u64>) -> Result<Self> {
        let d = config.d();
        if w.len() != d || reduced.len() != d {
            return Err(Error::InvalidVector(format!(
                "expected {d} components, got {} reduced and {} reduction indices",
                reduced.len(),
                w.len()
            )));
        }
        let m = config.m();
        for (i, (&z, &wj)) in reduced.iter().zip(&w).enumerate() {
            if z % 2 == 0 {
                return Err(Error::InvalidVector(format!("z_{} = {z} is even", i + 1)));
            }
            let bound = if wj < m { 1u64 << (m - wj) } else { 2 };
            if z >= bound {
                return Err(Error::InvalidVector(format!("z_{} = {z} exceeds {}", i + 1, bound - 1)));
            }
        }
        let n = config.n();
        let full = reduced
            .iter()
            .zip(&w)
            .map(|(&z, &wj)| if wj >= m { 0 } else { (z << wj) % n })
            .collect();
        Ok(Self { config, w, reduced, full })
    }

    /// Wraps a plain (non-reduced) generating vector `z in {0..N-1}^d`.
    /// Used for vectors that did not come from a reduced construction.
    pub fn from_full(config: LatticeConfig, full: Vec<u64>) -> Result<Self> {
        if full.len() != config.d() {
            return Err(Error::InvalidVector(format!("expected {} components", config.d())));
        }
        let n = config.n();
        let full: Vec<u64> = full.into_iter().map(|z| z % n).collect();
        // Reduced view: z = 2^w * odd (or 0, which behaves like w >= m).
        let m = config.m();
        let (w, reduced) = full
            .iter()
            .map(|&z| if z == 0 { (m, 1) } else { (z.trailing_zeros(), z >> z.trailing_zeros()) })
            .unzip();
        Ok(Self { config, w, reduced, full })
    }

    pub fn config(&self) -> LatticeConfig {
        self.config
    }

    pub fn n(&self) -> u64 {
        self.config.n()
    }

    pub fn d(&self) -> usize {
        self.config.d()
    }

    pub fn m(&self) -> u32 {
        self.config.m()
    }

    pub fn reduced(&self) -> &[u64] {
        &self.reduced
    }

    /// Components `Y_j z_j mod N`.
    pub fn full(&self) -> &[u64] {
        &self.full
    }

    pub fn reduction_indices(&self) -> &[u32] {
        &self.w
    }
}

/// The frequency window `M_{N,j,w_j} = {-h, ..., h}` with
/// `h = 2^{max(0, m - w_j)} - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexWindow {
    pub half_width: u64,
    pub punctured: bool,
}

impl IndexWindow {
    pub fn contains(&self, l: i64) -> bool {
        l.unsigned_abs() <= self.half_width && !(self.punctured && l == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.punctured && self.half_width == 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let h = self.half_width as i64;
        (-h..=h).filter(move |&l| !(self.punctured && l == 0))
    }

    pub fn len(&self) -> u64 {
        2 * self.half_width + 1 - u64::from(self.punctured)
    }
}

/// Window for coordinate with reduction index `w_j` when `N = 2^m`.
pub fn index_window(m: u32, w_j: u32, punctured: bool) -> IndexWindow {
    let half_width = if w_j >= m { 0 } else { (1u64 << (m - w_j)) - 1 };
    IndexWindow { half_width, punctured }
}

/// `prod_{j in supp(l)} gamma_j |l_j|^{-alpha}`: the weight of a dual lattice
/// frequency in the worst-case error; 1 for `l = 0`.
pub fn dual_weight(l: &[i64], alpha: f64, gamma: &[f64]) -> f64 {
    l.iter()
        .zip(gamma)
        .filter(|(&lj, _)| lj != 0)
        .fold(1.0, |acc, (&lj, &g)| acc * g * (lj.unsigned_abs() as f64).powf(-alpha))
}

/// `delta_N(a)`: 1 if `a = 0 (mod N)`, else 0.
pub fn delta_n(a: i128, n: u64) -> u8 {
    assert!(n >= 1);
    u8::from(a.rem_euclid(n as i128) == 0)
}
