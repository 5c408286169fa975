//! Worst-case errors, truncated quality measures, the `H` quantity and the
//! computable bounds that accompany the reduced CBC-DBD construction.
//!
//! Weights are passed as evaluated slices: `gamma[j - 1]` is `gamma_j`.
//! Reduction indices likewise: `w[j - 1]` is `w_j`. Every routine is a pure
//! function; accumulation order is fixed so results are reproducible.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{check_alpha, kernel_for, zeta, FourierKernel, LogSinTable};
use crate::lattice::{index_window, GeneratingVector, LatticeConfig};
use crate::sum::NeumaierSum;

/// Target accuracy of the cosine-series kernel used for non-even `alpha`.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// Feasibility guard for [`wce_dual_bruteforce`]: dimension and the number
/// of lattice points in the enumeration box `(2L+1)^d`.
pub const BRUTEFORCE_MAX_D: usize = 3;
pub const BRUTEFORCE_MAX_BOX: u128 = 200_000_000;

/// Feasibility guard for [`t_gamma_bruteforce`].
pub const T_BRUTEFORCE_MAX_D: usize = 3;
pub const T_BRUTEFORCE_MAX_M: u32 = 6;

/// Block size of the k-range in [`worst_case_error`]. Partial sums are
/// formed per block and combined in block order, so the result does not
/// depend on the number of worker threads.
const WCE_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    ClosedForm,
    TruncatedSeries,
    BruteForce,
}

impl EvalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::TruncatedSeries => "truncated-series",
            Self::BruteForce => "brute-force",
        }
    }
}

impl std::fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A worst-case error or quality measure with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub value: f64,
    pub method: EvalMethod,
    /// Bound on the gap between `value` and the exact quantity; 0 for exact
    /// methods (up to rounding).
    pub tail_bound: f64,
    /// Set when a per-point product left the floating-point range; `value`
    /// is then `+inf`.
    pub overflow: bool,
}

/// The computable bounds of the reduced construction for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Truncation error bound (tail outside the frequency windows).
    pub truncation_bound: f64,
    /// Upper bound on `T_gamma` for constructed vectors.
    pub t_gamma_bound: f64,
    /// Upper bound on `H_{d*}` for constructed vectors.
    pub h_bound: f64,
}

impl BoundReport {
    pub fn compute(cfg: LatticeConfig, w: &[u32], gamma: &[f64], alpha: f64) -> Result<Self> {
        let d_star = d_star_of(cfg.m(), w);
        Ok(Self {
            truncation_bound: truncation_bound(cfg, w, gamma, alpha)?,
            t_gamma_bound: t_bound_theorem(cfg, w, gamma),
            h_bound: h_upper_bound(cfg, gamma, d_star),
        })
    }
}

fn d_star_of(m: u32, w: &[u32]) -> usize {
    w.iter().take_while(|&&wj| wj < m).count()
}

fn check_lengths(what: &str, need: usize, have: usize) -> Result<()> {
    if have < need {
        return Err(Error::InvalidConfig(format!("{what}: need {need} entries, got {have}")));
    }
    Ok(())
}

/// `e_{N,d,alpha,gamma}(z) = -1 + (1/N) sum_k prod_j (1 + gamma_j K(k z_j / N))`
/// with `K` the Korobov Fourier kernel.
pub fn worst_case_error(z: &GeneratingVector, alpha: f64, gamma: &[f64]) -> Result<ErrorReport> {
    let kernel = kernel_for(alpha, DEFAULT_SERIES_TOL)?;
    worst_case_error_with(z, kernel.as_ref(), gamma)
}

/// [`worst_case_error`] with an explicit kernel strategy.
pub fn worst_case_error_with(z: &GeneratingVector, kernel: &dyn FourierKernel, gamma: &[f64]) -> Result<ErrorReport> {
    check_lengths("weights", z.d(), gamma.len())?;
    let n = z.n();
    let nf = n as f64;
    let table: Vec<f64> = (0..n).into_par_iter().map(|r| kernel.eval(r as f64 / nf)).collect();
    let mask = n - 1;
    let full = z.full();
    let gamma = &gamma[..z.d()];

    let blocks: Vec<(NeumaierSum, bool)> = (0..n as usize)
        .step_by(WCE_BLOCK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| {
            let end = (start + WCE_BLOCK).min(n as usize);
            let mut acc = NeumaierSum::new();
            let mut overflow = false;
            for k in start..end {
                let k = k as u64;
                let mut prod = 1.0;
                for (&zj, &gj) in full.iter().zip(gamma) {
                    prod *= 1.0 + gj * table[(k.wrapping_mul(zj) & mask) as usize];
                }
                if !prod.is_finite() {
                    overflow = true;
                }
                acc.add(prod);
            }
            (acc, overflow)
        })
        .collect();

    let overflow = blocks.iter().any(|(_, o)| *o);
    let total = NeumaierSum::sum_iter(blocks.iter().map(|(acc, _)| acc.value()));
    if overflow || !total.is_finite() {
        log::warn!("worst-case error overflow: a per-point product left the f64 range");
        return Ok(ErrorReport { value: f64::INFINITY, method: kernel.method(), tail_bound: 0.0, overflow: true });
    }
    let value = total / nf - 1.0;

    let tau = table_tail(kernel, n);
    let tail_bound = if tau == 0.0 {
        0.0
    } else {
        let two_zeta = 2.0 * zeta(kernel.alpha());
        let widened: f64 = gamma.iter().map(|g| 1.0 + g * (two_zeta + tau)).product();
        let base: f64 = gamma.iter().map(|g| 1.0 + g * two_zeta).product();
        widened - base
    };
    Ok(ErrorReport { value, method: kernel.method(), tail_bound, overflow: false })
}

fn table_tail(kernel: &dyn FourierKernel, n: u64) -> f64 {
    if kernel.method() == EvalMethod::ClosedForm {
        return 0.0;
    }
    (0..n).map(|r| kernel.tail_bound_at(r as f64 / n as f64)).fold(0.0, f64::max)
}

/// Dual-lattice enumeration oracle: sums `prod gamma_j |l_j|^-alpha` over
/// `0 != l in {-L..L}^d` with `l . z = 0 (mod N)`.
///
/// `tail_bound` bounds the omitted mass of dual frequencies with some
/// `|l_j| > L`: for fixed other components the admissible `l_j` form an
/// arithmetic progression of step `P_j = N / gcd(z_j, N)`, whose tail beyond
/// `L` is bounded by a midpoint-rule integral; the remaining components
/// contribute at most `1 + 2 gamma_i zeta(alpha)` each.
pub fn wce_dual_bruteforce(z: &GeneratingVector, alpha: f64, gamma: &[f64], cutoff: u64) -> Result<ErrorReport> {
    check_alpha(alpha)?;
    let d = z.d();
    check_lengths("weights", d, gamma.len())?;
    if d > BRUTEFORCE_MAX_D {
        return Err(Error::Guard(format!("dual-lattice enumeration supports d <= {BRUTEFORCE_MAX_D}, got {d}")));
    }
    let box_size = (2 * cutoff as u128 + 1).pow(d as u32);
    if box_size > BRUTEFORCE_MAX_BOX {
        return Err(Error::Guard(format!(
            "enumeration box (2L+1)^d = {box_size} exceeds {BRUTEFORCE_MAX_BOX} (L = {cutoff}, d = {d})"
        )));
    }
    let n = z.n();
    let l_max = cutoff as i64;
    let weights: Vec<Vec<f64>> = gamma[..d]
        .iter()
        .map(|&g| {
            (-l_max..=l_max)
                .map(|l| if l == 0 { 1.0 } else { g * (l.unsigned_abs() as f64).powf(-alpha) })
                .collect()
        })
        .collect();
    let windows: Vec<(i64, i64)> = vec![(-l_max, l_max); d];
    let value = enumerate_dual(z.full(), n, &windows, &weights);

    let zeta_a = zeta(alpha);
    let tail_bound: f64 = (0..d)
        .map(|j| {
            let zj = z.full()[j];
            let g = if zj == 0 { n } else { gcd(zj, n) };
            let step = n / g;
            // With a single coordinate the other contribution is 0, so the
            // first admissible l_j > L is the next multiple of the step.
            let first = if d == 1 { step * (cutoff / step + 1) } else { cutoff + 1 };
            let side = progression_tail(first as f64, step as f64, alpha);
            let others: f64 = (0..d).filter(|&i| i != j).map(|i| 1.0 + 2.0 * gamma[i] * zeta_a).product();
            2.0 * gamma[j] * side * others
        })
        .sum();
    Ok(ErrorReport { value, method: EvalMethod::BruteForce, tail_bound, overflow: false })
}

/// Upper bound on `sum_{t >= 0} (a + t P)^-alpha` for `a >= 1`.
fn progression_tail(a: f64, step: f64, alpha: f64) -> f64 {
    let f = |x: f64| x.powf(-alpha);
    let integral_from = |x: f64| x.powf(1.0 - alpha) / (alpha - 1.0);
    // Decreasing f: first term plus integral.
    let coarse = f(a) + integral_from(a) / step;
    // Convex f: each term is at most the mean over the surrounding step.
    if a - step / 2.0 > 0.0 {
        coarse.min(integral_from(a - step / 2.0) / step)
    } else {
        coarse
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sums `prod_j weights[j][l_j - lo_j]` over `l != 0` in the box with
/// `l . z = 0 (mod N)`, lexicographic order, compensated.
fn enumerate_dual(full: &[u64], n: u64, windows: &[(i64, i64)], weights: &[Vec<f64>]) -> f64 {
    let d = full.len();
    let mut acc = NeumaierSum::new();
    if windows.iter().any(|(lo, hi)| lo > hi) {
        return 0.0;
    }
    let mut l: Vec<i64> = windows.iter().map(|w| w.0).collect();
    // N divides 2^64, so two's-complement wrapping arithmetic is exact mod N.
    let mask = n - 1;
    loop {
        let dot = l.iter().zip(full).fold(0u64, |acc, (&lj, &zj)| acc.wrapping_add((lj as u64).wrapping_mul(zj)));
        if dot & mask == 0 && l.iter().any(|&x| x != 0) {
            let mut prod = 1.0;
            for j in 0..d {
                prod *= weights[j][(l[j] - windows[j].0) as usize];
            }
            acc.add(prod);
        }
        // Odometer increment, last coordinate fastest.
        let mut j = d;
        loop {
            if j == 0 {
                return acc.value();
            }
            j -= 1;
            if l[j] < windows[j].1 {
                l[j] += 1;
                break;
            }
            l[j] = windows[j].0;
        }
    }
}

/// Exhaustive `T_{alpha,gamma}(N, z, w)`: the dual-lattice sum restricted to
/// the frequency windows `M_{N,j,w_j}`. `alpha = 1` gives `T_gamma`.
/// Windows come from the vector's reduction indices.
pub fn t_gamma_bruteforce(z: &GeneratingVector, gamma: &[f64], alpha: f64) -> Result<f64> {
    let d = z.d();
    check_lengths("weights", d, gamma.len())?;
    if d > T_BRUTEFORCE_MAX_D || z.m() > T_BRUTEFORCE_MAX_M {
        return Err(Error::Guard(format!(
            "window enumeration supports d <= {T_BRUTEFORCE_MAX_D} and m <= {T_BRUTEFORCE_MAX_M}, got d = {d}, m = {}",
            z.m()
        )));
    }
    let m = z.m();
    let mut windows = Vec::with_capacity(d);
    let mut weights = Vec::with_capacity(d);
    for (j, &wj) in z.reduction_indices().iter().enumerate() {
        let h = index_window(m, wj, false).half_width as i64;
        windows.push((-h, h));
        weights.push(
            (-h..=h)
                .map(|l| if l == 0 { 1.0 } else { gamma[j] * (l.unsigned_abs() as f64).powf(-alpha) })
                .collect::<Vec<f64>>(),
        );
    }
    Ok(enumerate_dual(z.full(), z.n(), &windows, &weights))
}

/// `T_{alpha,gamma}(N, z, w)` through the character property:
/// `(1/N) sum_k prod_j (1 + gamma_j sum_{l in M*_j} e^{2 pi i k l z_j / N} / |l|^alpha) - 1`.
///
/// Cost is `O(N * (d + sum of distinct window widths))`; exact up to rounding.
pub fn t_gamma(z: &GeneratingVector, gamma: &[f64], alpha: f64) -> Result<f64> {
    let d = z.d();
    check_lengths("weights", d, gamma.len())?;
    let n = z.n();
    let m = z.m();
    let mask = n - 1;
    let cos_table: Vec<f64> = (0..n).map(|q| (2.0 * PI * q as f64 / n as f64).cos()).collect();

    // Truncated kernels V_h[r] = 2 sum_{l=1}^{h} cos(2 pi r l / N) l^-alpha, one per window width.
    let mut kernels: Vec<(u64, Vec<f64>)> = Vec::new();
    let mut active: Vec<(usize, usize)> = Vec::new(); // (coordinate, kernel index)
    for (j, &wj) in z.reduction_indices().iter().enumerate() {
        let h = index_window(m, wj, true).half_width;
        if h == 0 {
            continue;
        }
        let idx = match kernels.iter().position(|(hh, _)| *hh == h) {
            Some(i) => i,
            None => {
                let powers: Vec<f64> = (1..=h).map(|l| (l as f64).powf(-alpha)).collect();
                let table = (0..n)
                    .into_par_iter()
                    .map(|r| {
                        let mut acc = NeumaierSum::new();
                        for (l, p) in (1..=h).zip(&powers) {
                            acc.add(cos_table[(r.wrapping_mul(l) & mask) as usize] * p);
                        }
                        2.0 * acc.value()
                    })
                    .collect();
                kernels.push((h, table));
                kernels.len() - 1
            }
        };
        active.push((j, idx));
    }
    let full = z.full();
    let mut acc = NeumaierSum::new();
    for k in 0..n {
        let mut prod = 1.0;
        for &(j, idx) in &active {
            prod *= 1.0 + gamma[j] * kernels[idx].1[(k.wrapping_mul(full[j]) & mask) as usize];
        }
        acc.add(prod - 1.0);
    }
    Ok(acc.value() / n as f64)
}

/// `H_{s,N,gamma,w}(z_1..z_s)` for product weights:
/// `sum_{r=1}^{s} gamma_r sum_{k: k != 0 mod 2^{m-w_r}} u_r(k) prod_{j<r} (1 + gamma_j u_j(k))`
/// with `u_j(k) = log(1/sin^2(pi z_j k / 2^{m-w_j}))`.
///
/// `z_prefix` holds reduced components. Cost `O(s N)`.
pub fn compute_h(z_prefix: &[u64], m: u32, w: &[u32], gamma: &[f64]) -> Result<f64> {
    let s = z_prefix.len();
    check_lengths("reduction indices", s, w.len())?;
    check_lengths("weights", s, gamma.len())?;
    if let Some(j) = (0..s).find(|&j| w[j] >= m) {
        return Err(Error::InvalidConfig(format!("H is defined for s <= d*, but w_{} = {} >= m = {m}", j + 1, w[j])));
    }
    if let Some(j) = (0..s).find(|&j| z_prefix[j].is_multiple_of(2) || z_prefix[j] >= 1u64 << (m - w[j])) {
        return Err(Error::InvalidVector(format!("z_{} = {} is not odd and below 2^(m - w)", j + 1, z_prefix[j])));
    }
    let table = LogSinTable::new(m);
    let n = 1u64 << m;
    let mut acc = NeumaierSum::new();
    for k in 1..n {
        let mut prod = 1.0;
        for r in 0..s {
            let bits = m - w[r];
            // w is non-decreasing: once k = 0 mod 2^{m-w_r} it stays so.
            if k & ((1u64 << bits) - 1) == 0 {
                break;
            }
            let u = table.at(z_prefix[r].wrapping_mul(k), bits);
            acc.add(gamma[r] * u * prod);
            prod *= 1.0 + gamma[r] * u;
        }
    }
    Ok(acc.value())
}

/// `N [ -1 + prod_{j=1}^{s} (1 + gamma_j log 4) ]`.
pub fn h_upper_bound(cfg: LatticeConfig, gamma: &[f64], s: usize) -> f64 {
    let log4 = 4f64.ln();
    let prod: f64 = gamma[..s].iter().map(|g| 1.0 + g * log4).product();
    cfg.n() as f64 * (prod - 1.0)
}

/// Truncation bound
/// `sum_{u != {}} gamma_u (4 zeta(alpha))^{|u|} / 2^{alpha max(0, m - max_{j in u} w_j)}`,
/// grouped by the largest index of `u` (valid since `w` is non-decreasing).
pub fn truncation_bound(cfg: LatticeConfig, w: &[u32], gamma: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let d = cfg.d();
    check_lengths("reduction indices", d, w.len())?;
    check_lengths("weights", d, gamma.len())?;
    let c = 4.0 * zeta(alpha);
    let m = cfg.m();
    let mut prefix = 1.0;
    let mut acc = NeumaierSum::new();
    for j in 0..d {
        let gap = m.saturating_sub(w[j]) as f64;
        acc.add(gamma[j] * c * 2f64.powf(-alpha * gap) * prefix);
        prefix *= 1.0 + gamma[j] * c;
    }
    Ok(acc.value())
}

/// Bound on `T_gamma` for a constructed vector:
/// `sum_{{} != u subset [d*]} gamma_u 2 (6 log N)^{|u|+1} / 2^{m - max_{j in u} w_j}`.
pub fn t_bound_theorem(cfg: LatticeConfig, w: &[u32], gamma: &[f64]) -> f64 {
    let m = cfg.m();
    if m <= 3 {
        log::warn!("T_gamma bound is stated for m > 3; evaluating at m = {m} anyway");
    }
    let d_star = d_star_of(m, &w[..cfg.d().min(w.len())]);
    let c = 6.0 * (cfg.n() as f64).ln();
    let mut prefix = 1.0;
    let mut acc = NeumaierSum::new();
    for j in 0..d_star {
        acc.add(gamma[j] * c * 2f64.powi(w[j] as i32) * prefix);
        prefix *= 1.0 + gamma[j] * c;
    }
    2.0 * c / cfg.n() as f64 * acc.value()
}
