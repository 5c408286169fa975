//! The digit-wise quality function `h_{s,v,m,gamma,w}`.
//!
//! For odd `x < 2^v`,
//!
//! ```text
//! h(x) = sum_{t=v}^{m-w_s} 2^{-(t-v)} sum_{odd k < 2^{t+w_s}}
//!          prod_{j<s} (1 + gamma_j L(z_j k, t + w_s - w_j)) * (1 + gamma_s L(k x, v))
//! ```
//!
//! with `L(a, b) = log(1/sin^2(pi a / 2^b))`. Both evaluators accumulate in
//! the same order (t ascending, k ascending, products over j ascending) and
//! therefore return bit-identical values.

use crate::error::{Error, Result};
use crate::kernel::log_inv_sin2;
use crate::sum::NeumaierSum;

use super::ustate::UState;

fn check_step(x: u64, s: usize, v: u32, m: u32, w: &[u32]) -> Result<u32> {
    if s == 0 || s > w.len() {
        return Err(Error::InvalidConfig(format!("coordinate s = {s} outside 1..={}", w.len())));
    }
    let ws = w[s - 1];
    if ws >= m {
        return Err(Error::InvalidConfig(format!("coordinate {s} has w = {ws} >= m = {m}")));
    }
    if v == 0 || v > m - ws {
        return Err(Error::InvalidConfig(format!("digit v = {v} outside 1..={}", m - ws)));
    }
    if x.is_multiple_of(2) || x >= 1u64 << v {
        return Err(Error::InvalidVector(format!("candidate x = {x} must be odd and below 2^{v}")));
    }
    Ok(ws)
}

/// Direct nested-loop evaluation. `z_prefix` holds the reduced components
/// `z_1..z_{s-1}`.
pub fn quality_h_reference(x: u64, s: usize, v: u32, z_prefix: &[u64], m: u32, w: &[u32], gamma: &[f64]) -> Result<f64> {
    let ws = check_step(x, s, v, m, w)?;
    if z_prefix.len() < s - 1 || gamma.len() < s {
        return Err(Error::InvalidConfig(format!("coordinate {s} needs {} prior components and {s} weights", s - 1)));
    }
    let mut acc = NeumaierSum::new();
    for t in v..=m - ws {
        let mut inner = NeumaierSum::new();
        for k in (1..1u64 << (t + ws)).step_by(2) {
            let mut prod = 1.0;
            for j in 0..s - 1 {
                prod *= 1.0 + gamma[j] * log_inv_sin2(z_prefix[j].wrapping_mul(k), t + ws - w[j]);
            }
            prod *= 1.0 + gamma[s - 1] * log_inv_sin2(k.wrapping_mul(x), v);
            inner.add(prod);
        }
        acc.add(inner.value() * level_scale(t - v));
    }
    Ok(acc.value())
}

/// Evaluation through the stored products in `state`, which must hold
/// coordinates `1..s-1`. Returns the value and the number of terms summed.
pub fn quality_h_fast(x: u64, s: usize, v: u32, state: &UState, w: &[u32], gamma: &[f64]) -> Result<(f64, u64)> {
    let m = state.m();
    let ws = check_step(x, s, v, m, w)?;
    if state.current_s() + 1 != s {
        return Err(Error::InvalidConfig(format!(
            "u-vector holds coordinates 1..={} but h was requested for s = {s}",
            state.current_s()
        )));
    }
    let factors = candidate_factors(x, v, gamma[s - 1], state);
    let mask = (1u64 << v) - 1;
    let u = state.u();
    let mut acc = NeumaierSum::new();
    let mut ops = 0;
    for t in v..=m - ws {
        let shift = m - ws - t;
        let mut inner = NeumaierSum::new();
        for k in (1..1u64 << (t + ws)).step_by(2) {
            inner.add(u[(k << shift) as usize] * factors[(k & mask) as usize]);
        }
        ops += 1u64 << (t + ws - 1);
        acc.add(inner.value() * level_scale(t - v));
    }
    Ok((acc.value(), ops))
}

/// `1 + gamma_s L(k x, v)` indexed by `k mod 2^v`; even slots unused.
fn candidate_factors(x: u64, v: u32, gamma_s: f64, state: &UState) -> Vec<f64> {
    let table = state.table();
    let mut f = vec![1.0; 1usize << v];
    for r in (1..1u64 << v).step_by(2) {
        f[r as usize] = 1.0 + gamma_s * table.at(r.wrapping_mul(x), v);
    }
    f
}

fn level_scale(e: u32) -> f64 {
    0.5f64.powi(e as i32)
}
