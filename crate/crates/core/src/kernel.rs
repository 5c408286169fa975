//! One-dimensional building blocks: the Korobov Fourier kernel
//! `sum_{l != 0} e^{2 pi i l x} / |l|^alpha`, `zeta(alpha)`, and
//! `log(1/sin^2(pi a / 2^b))` on dyadic rationals.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::eval::EvalMethod;
use crate::sum::NeumaierSum;

/// Largest even `alpha` evaluated through Bernoulli polynomials.
pub const MAX_BERNOULLI_ORDER: u32 = 30;

/// Hard cap on the number of cosine terms in the series fallback.
pub const MAX_SERIES_TERMS: u64 = 1 << 26;

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Riemann zeta for real `alpha > 1`: direct sum of the first terms plus an
/// Euler–Maclaurin tail, accurate to about `1e-15` relative.
pub fn zeta(alpha: f64) -> f64 {
    assert!(alpha > 1.0, "zeta needs alpha > 1");
    const HEAD: u32 = 64;
    let mut acc = NeumaierSum::new();
    for n in (1..HEAD).rev() {
        acc.add((n as f64).powf(-alpha));
    }
    let n = HEAD as f64;
    let f = n.powf(-alpha);
    let a = alpha;
    // sum_{k >= n} k^-a = n^{1-a}/(a-1) + f(n)/2 - sum B_2j/(2j)! f^{(2j-1)}(n)
    acc.add(n.powf(1.0 - a) / (a - 1.0));
    acc.add(f / 2.0);
    acc.add(a * f / n / 12.0);
    acc.add(-a * (a + 1.0) * (a + 2.0) * f / n.powi(3) / 720.0);
    acc.add(a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) * f / n.powi(5) / 30240.0);
    acc.value()
}

/// Evaluates `sum_{l in Z, l != 0} e^{2 pi i l x} / |l|^alpha` for `x` in `[0, 1)`.
pub trait FourierKernel: Send + Sync {
    fn name(&self) -> &'static str;
    fn method(&self) -> EvalMethod;
    fn alpha(&self) -> f64;
    fn eval(&self, x: f64) -> f64;
    /// Bound on `|eval(x) - exact(x)|`.
    fn tail_bound_at(&self, x: f64) -> f64;
}

/// Exact kernel for even integer `alpha` via
/// `(-1)^{alpha/2 + 1} (2 pi)^alpha B_alpha({x}) / alpha!`.
#[derive(Debug, Clone)]
pub struct BernoulliKernel {
    order: u32,
    /// Coefficients of `B_order(x)`, constant term first, pre-scaled by the
    /// kernel prefactor.
    coeffs: Vec<f64>,
}

impl BernoulliKernel {
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 || !order.is_multiple_of(2) || order > MAX_BERNOULLI_ORDER {
            return Err(Error::InvalidAlpha(order as f64));
        }
        let poly = bernoulli_polynomial(order);
        let mut scale = (2.0 * PI).powi(order as i32) / factorial(order);
        if (order / 2).is_multiple_of(2) {
            scale = -scale;
        }
        let coeffs = poly.into_iter().map(|c| c * scale).collect();
        Ok(Self { order, coeffs })
    }
}

impl FourierKernel for BernoulliKernel {
    fn name(&self) -> &'static str {
        "bernoulli"
    }

    fn method(&self) -> EvalMethod {
        EvalMethod::ClosedForm
    }

    fn alpha(&self) -> f64 {
        self.order as f64
    }

    fn eval(&self, x: f64) -> f64 {
        let x = x - x.floor();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn tail_bound_at(&self, _x: f64) -> f64 {
        0.0
    }
}

/// `2 sum_{l=1}^{L} cos(2 pi l x) / l^alpha`, truncated where a rigorous tail
/// bound drops below `tol`.
///
/// Two tail bounds are available: `2 L^{1-alpha} / (alpha - 1)` for any `x`,
/// and, by Abel summation against the bounded partial sums of `cos`,
/// `2 (L+1)^{-alpha} / sin(pi x)` for `x` off the integers. `L` is the
/// smaller of the two requirements, capped at [`MAX_SERIES_TERMS`]. At `x = 0`
/// the series is `2 zeta(alpha)`.
#[derive(Debug, Clone)]
pub struct SeriesKernel {
    alpha: f64,
    tol: f64,
    zeta2: f64,
}

impl SeriesKernel {
    pub fn new(alpha: f64, tol: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidConfig(format!("series tolerance must be positive, got {tol}")));
        }
        Ok(Self { alpha, tol, zeta2: 2.0 * zeta(alpha) })
    }

    /// Number of terms used at `x` and the resulting tail bound.
    pub fn truncation(&self, x: f64) -> (u64, f64) {
        let alpha = self.alpha;
        let x = x - x.floor();
        if x == 0.0 {
            return (0, 0.0);
        }
        let global = (2.0 / (self.tol * (alpha - 1.0))).powf(1.0 / (alpha - 1.0)).ceil();
        let sin = (PI * x.min(1.0 - x)).sin();
        let abel = (2.0 / (self.tol * sin)).powf(1.0 / alpha).ceil();
        let needed = global.min(abel);
        let terms = if needed.is_finite() { (needed as u64).clamp(1, MAX_SERIES_TERMS) } else { MAX_SERIES_TERMS };
        let lf = terms as f64;
        let tail = (2.0 * lf.powf(1.0 - alpha) / (alpha - 1.0)).min(2.0 * (lf + 1.0).powf(-alpha) / sin);
        if tail > self.tol {
            log::warn!("series kernel at x={x} truncated at {terms} terms; tail bound {tail:e} exceeds tol {:e}", self.tol);
        }
        (terms, tail)
    }
}

impl FourierKernel for SeriesKernel {
    fn name(&self) -> &'static str {
        "series"
    }

    fn method(&self) -> EvalMethod {
        EvalMethod::TruncatedSeries
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn eval(&self, x: f64) -> f64 {
        let x = x - x.floor();
        if x == 0.0 {
            return self.zeta2;
        }
        let (terms, _) = self.truncation(x);
        let mut acc = NeumaierSum::new();
        for l in 1..=terms {
            let lf = l as f64;
            // Reduce l*x mod 1 before scaling by 2 pi to keep the argument small.
            let arg = (lf * x).fract();
            acc.add((2.0 * PI * arg).cos() * lf.powf(-self.alpha));
        }
        2.0 * acc.value()
    }

    fn tail_bound_at(&self, x: f64) -> f64 {
        self.truncation(x).1
    }
}

/// Picks the exact Bernoulli kernel for even integer `alpha`, otherwise the
/// truncated series.
pub fn kernel_for(alpha: f64, tol: f64) -> Result<Box<dyn FourierKernel>> {
    check_alpha(alpha)?;
    if alpha.fract() == 0.0 && (alpha as u32).is_multiple_of(2) && alpha as u32 <= MAX_BERNOULLI_ORDER {
        Ok(Box::new(BernoulliKernel::new(alpha as u32)?))
    } else {
        Ok(Box::new(SeriesKernel::new(alpha, tol)?))
    }
}

/// `sum_{l != 0} e^{2 pi i l x} / |l|^alpha`, using [`kernel_for`].
pub fn fourier_kernel(x: f64, alpha: f64, tol: f64) -> Result<f64> {
    Ok(kernel_for(alpha, tol)?.eval(x))
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`).
fn bernoulli_numbers(n: u32) -> Vec<f64> {
    let n = n as usize;
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for k in 1..=n {
        // sum_{j=0}^{k} C(k+1, j) B_j = 0
        let mut binom = 1.0; // C(k+1, 0)
        let mut s = 0.0;
        for (j, bj) in b.iter().enumerate().take(k) {
            s += binom * bj;
            binom = binom * (k + 1 - j) as f64 / (j + 1) as f64;
        }
        b[k] = -s / (k + 1) as f64;
    }
    b
}

/// Coefficients of `B_n(x) = sum_k C(n,k) B_k x^{n-k}`, constant term first.
fn bernoulli_polynomial(n: u32) -> Vec<f64> {
    let b = bernoulli_numbers(n);
    let n = n as usize;
    let mut coeffs = vec![0.0; n + 1];
    let mut binom = 1.0;
    for (k, bk) in b.iter().enumerate() {
        coeffs[n - k] = binom * bk;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    coeffs
}

/// `log(1 / sin^2(pi a / 2^bits))` for `a` not divisible by `2^bits`.
///
/// The argument is folded to `min(a, 2^bits - a) mod 2^bits` so that equal
/// values of `sin^2` give equal bits regardless of how they were reached;
/// division by `2^bits` is exact, so `(a, bits)` and `(2a, bits + 1)` agree.
#[inline]
pub fn log_inv_sin2(a: u64, bits: u32) -> f64 {
    let modulus = 1u64 << bits;
    let a = a & (modulus - 1);
    debug_assert!(a != 0, "log(1/sin^2) is singular at integers");
    let a = a.min(modulus - a);
    let x = a as f64 / modulus as f64;
    -2.0 * (PI * x).sin().ln()
}

/// The `2^m` values `log(1/sin^2(pi k / 2^m))`, `k = 1..2^m - 1` (entry 0 is
/// unused and holds `+inf`).
#[derive(Debug, Clone)]
pub struct LogSinTable {
    m: u32,
    values: Vec<f64>,
}

impl LogSinTable {
    pub fn new(m: u32) -> Self {
        let n = 1u64 << m;
        let mut values = Vec::with_capacity(n as usize);
        values.push(f64::INFINITY);
        values.extend((1..n).map(|k| log_inv_sin2(k, m)));
        Self { m, values }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `log(1/sin^2(pi a / 2^t))` for `t <= m`, via index `a 2^{m-t} mod 2^m`.
    #[inline]
    pub fn at(&self, a: u64, t: u32) -> f64 {
        let mask = (1u64 << self.m) - 1;
        self.values[((a << (self.m - t)) & mask) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
