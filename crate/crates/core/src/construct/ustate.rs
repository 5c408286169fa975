//! The u-vector of stored partial products.
//!
//! After coordinate `s` is finalized,
//! `u[k 2^{m-w_s-t}] = prod_{j<=s} (1 + gamma_j L(z_j k, t + w_s - w_j))`
//! for `t = 1..m-w_s` and odd `k < 2^{t+w_s}`. Reading the same slot with
//! the next coordinate's offset `m - w_{s+1} - t` lands on level
//! `t + w_{s+1} - w_s`, which is exactly the product that coordinate needs.

use crate::kernel::LogSinTable;

#[derive(Debug, Clone)]
pub struct UState {
    m: u32,
    table: LogSinTable,
    u: Vec<f64>,
    current_s: usize,
}

impl UState {
    /// Empty product (all ones) and the `2^m` log-sin table.
    pub fn new(m: u32) -> Self {
        Self { m, table: LogSinTable::new(m), u: vec![1.0; 1usize << m], current_s: 0 }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of finalized coordinates.
    pub fn current_s(&self) -> usize {
        self.current_s
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn table(&self) -> &LogSinTable {
        &self.table
    }

    /// Folds digit `v` of the coordinate under construction into level `v`:
    /// `u[k 2^{m-w_s-v}] *= 1 + gamma_s L(k z_{s,v}, v)` for odd `k < 2^{v+w_s}`.
    /// Returns the number of slots touched.
    pub fn apply_digit(&mut self, w_s: u32, v: u32, z_sv: u64, gamma_s: f64) -> u64 {
        assert!(w_s + v <= self.m, "digit {v} is beyond level m - w_s");
        let shift = self.m - w_s - v;
        for k in (1..1u64 << (v + w_s)).step_by(2) {
            self.u[(k << shift) as usize] *= 1.0 + gamma_s * self.table.at(k.wrapping_mul(z_sv), v);
        }
        1u64 << (v + w_s - 1)
    }

    pub fn finish_coordinate(&mut self) {
        self.current_s += 1;
    }
}
