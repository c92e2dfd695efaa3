//! Heat trace `G(t) = sum_j e^(-lambda_j t)` over the positive spectrum.
//!
//! Three evaluators are provided. [`g_direct`] sums the double series over
//! `(p, q)` with exact multiplicities and is the oracle. [`g1`] and [`g2`] are
//! the single-sum forms of the two positive pieces obtained from the binomial
//! split of `dim H_{p,q}`:
//!
//! ```text
//! G1(t) = sum_{q>=1} binom(n+q-2, q)   e^(-2tq(n-1)) / (1 - e^(-2tq))^n
//! G2(t) = sum_{w>=1} binom(w-1, n-2)   e^(-2tw)      / (1 - e^(-2tw))^n
//! ```
//!
//! Every evaluator stops once a certified bound on the discarded tail drops
//! below `max(abs_tol, rel_tol * partial_sum)`. The tails are bounded
//! geometrically: if `b_j` is the binomial weight and `r` the exponential
//! ratio, then for `j > J` the term ratio is at most
//! `rho = r * b_{J+2} / b_{J+1}` (the binomial ratios decrease), and the factor
//! `(1 - e^(-2t j))^(-n)` is at most `C = (1 - e^(-2t (J+1)))^(-n)`, so the tail
//! is at most `C * b_{J+1} r^(J+1) / (1 - rho)`.
//!
//! `1 - e^(-x)` is always evaluated as `-expm1(-x)`, which keeps the terms
//! accurate as `t -> 0`.

use num_traits::ToPrimitive;

use crate::combinatorics::{binom_f64, dim_hpq};
use crate::error::{require_dimension, Error, Result};
use crate::special::CompensatedSum;

/// Truncation and budget settings shared by the heat-trace evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTraceOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub term_cap: u64,
    /// Smallest accepted `t`; term counts grow like `1/t`.
    pub min_t: f64,
}

impl Default for HeatTraceOptions {
    fn default() -> Self {
        HeatTraceOptions { abs_tol: 1e-15, rel_tol: 1e-13, term_cap: 10_000_000, min_t: 1e-6 }
    }
}

impl HeatTraceOptions {
    fn target(&self, partial: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * partial.abs())
    }

    fn validate(&self, n: u32, t: f64) -> Result<()> {
        require_dimension(n as i64, 2)?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("t must be finite and > 0, got {t}")));
        }
        if t < self.min_t {
            return Err(Error::invalid(format!(
                "t = {t:e} is below the configured floor {:e}; lower the floor to proceed",
                self.min_t
            )));
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.term_cap == 0 {
            return Err(Error::invalid("heat-trace tolerances and term cap must be positive"));
        }
        Ok(())
    }
}

/// One evaluation of a heat-trace quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTraceSample {
    pub t: f64,
    pub value: f64,
    /// Certified bound on the discarded tail.
    pub truncation_bound: f64,
    pub terms_used: u64,
}

/// `(1 - e^(-x))^(-n)`.
#[inline]
fn inv_one_minus_exp_pow(x: f64, n: u32) -> f64 {
    (-(-x).exp_m1()).powi(-(n as i32))
}

/// Geometric tail bound `c * lead / (1 - rho)`, infinite when `rho >= 1`.
#[inline]
fn geometric_tail(c: f64, lead: f64, rho: f64) -> f64 {
    if lead == 0.0 {
        0.0
    } else if rho < 1.0 {
        c * lead / (1.0 - rho)
    } else {
        f64::INFINITY
    }
}

fn cap_error(what: &str, cap: u64, t: f64) -> Error {
    Error::NonConvergence(format!("{what} did not reach its tolerance within {cap} terms at t = {t:e}"))
}

/// Single sum for `G1(t)`.
pub fn g1(n: u32, t: f64) -> Result<HeatTraceSample> {
    g1_with(n, t, &HeatTraceOptions::default())
}

pub fn g1_with(n: u32, t: f64, opts: &HeatTraceOptions) -> Result<HeatTraceSample> {
    opts.validate(n, t)?;
    let k = n as i64 - 2;
    let nf = (n - 1) as f64;
    let weight = |q: u64| binom_f64(q as i64 + k, k);
    let mut sum = CompensatedSum::new();
    for q in 1..=opts.term_cap {
        let x = 2.0 * t * q as f64;
        sum.add(weight(q) * (-x * nf).exp() * inv_one_minus_exp_pow(x, n));

        let next = q + 1;
        let c = inv_one_minus_exp_pow(2.0 * t * next as f64, n);
        let lead = weight(next) * (-2.0 * t * nf * next as f64).exp();
        // binom(q+1+k, k) / binom(q+k, k) = (q+1+k) / (q+1), decreasing in q.
        let rho = (-2.0 * t * nf).exp() * (next + 1 + k as u64) as f64 / (next + 1) as f64;
        let tail = geometric_tail(c, lead, rho);
        if tail <= opts.target(sum.value()) {
            return Ok(HeatTraceSample { t, value: sum.value(), truncation_bound: tail, terms_used: q });
        }
    }
    Err(cap_error("G1", opts.term_cap, t))
}

/// Single sum for `G2(t)`.
pub fn g2(n: u32, t: f64) -> Result<HeatTraceSample> {
    g2_with(n, t, &HeatTraceOptions::default())
}

pub fn g2_with(n: u32, t: f64, opts: &HeatTraceOptions) -> Result<HeatTraceSample> {
    opts.validate(n, t)?;
    let k = n as i64 - 2;
    let weight = |w: u64| binom_f64(w as i64 - 1, k);
    let ratio = (-2.0 * t).exp();
    let mut sum = CompensatedSum::new();
    let first = (k + 1) as u64;
    let mut terms = 0;
    for w in first.. {
        terms += 1;
        if terms > opts.term_cap {
            break;
        }
        let x = 2.0 * t * w as f64;
        sum.add(weight(w) * (-x).exp() * inv_one_minus_exp_pow(x, n));

        let next = w + 1;
        let c = inv_one_minus_exp_pow(2.0 * t * next as f64, n);
        let lead = weight(next) * (-2.0 * t * next as f64).exp();
        // binom(w, k) / binom(w-1, k) = w / (w - k), decreasing in w.
        let rho = ratio * next as f64 / (next as i64 - k) as f64;
        let tail = geometric_tail(c, lead, rho);
        if tail <= opts.target(sum.value()) {
            return Ok(HeatTraceSample { t, value: sum.value(), truncation_bound: tail, terms_used: terms });
        }
    }
    Err(cap_error("G2", opts.term_cap, t))
}

/// Exact multiplicity converted to `f64`.
fn dim_f64(n: u32, p: u64, q: u64) -> f64 {
    dim_hpq(n as i64, p as i64, q as i64)
        .expect("valid bidegree")
        .to_f64()
        .unwrap_or(f64::INFINITY)
}

/// Upper bound on `dim H_{p+1,q} / dim H_{p,q}` valid for every `p' >= p`.
///
/// From `dim H_{p,q} = (p+q+n-1)/(n-1) binom(p+n-2, p) binom(q+n-2, q)` the
/// ratio is `(p+q+n)/(p+q+n-1) * (p+n-1)/(p+1)`, decreasing in `p`.
fn dim_ratio_bound(n: u32, p: u64, q: u64) -> f64 {
    let (n, p, q) = (n as f64, p as f64, q as f64);
    (p + q + n) / (p + q + n - 1.0) * (p + n - 1.0) / (p + 1.0)
}

/// The double sum `sum_{q>=1} sum_{p>=0} dim H_{p,q} e^(-2q(p+n-1)t)` with exact multiplicities.
///
/// The `q` range is cut where the outer tail, bounded through
/// `dim H_{p,q} <= binom(n+p-1, p) binom(n+q-1, q)`, falls below half the
/// target; each row is then summed until its own tail is below
/// `target / (2Q)`. The target is relative to the single-term lower bound
/// `n e^(-2(n-1)t)`.
pub fn g_direct(n: u32, t: f64) -> Result<HeatTraceSample> {
    g_direct_with(n, t, &HeatTraceOptions::default())
}

pub fn g_direct_with(n: u32, t: f64, opts: &HeatTraceOptions) -> Result<HeatTraceSample> {
    opts.validate(n, t)?;
    let m = (n - 1) as f64;
    let lower = n as f64 * (-2.0 * m * t).exp();
    let target = opts.target(lower);

    // Outer cut.
    let r = (-2.0 * t * m).exp();
    let outer_weight = |q: u64| binom_f64(q as i64 + n as i64 - 1, n as i64 - 1);
    let mut q_max = 0u64;
    let outer_tail = loop {
        q_max += 1;
        if q_max > opts.term_cap {
            return Err(cap_error("G (direct) outer sum", opts.term_cap, t));
        }
        let next = q_max + 1;
        let c = inv_one_minus_exp_pow(2.0 * t * next as f64, n);
        let lead = outer_weight(next) * (-2.0 * t * m * next as f64).exp();
        let rho = r * (next + n as u64) as f64 / (next + 1) as f64;
        let tail = geometric_tail(c, lead, rho);
        if tail <= 0.5 * target {
            break tail;
        }
    };

    let row_target = 0.5 * target / q_max as f64;
    let mut sum = CompensatedSum::new();
    let mut bound = outer_tail;
    let mut terms = 0u64;
    for q in 1..=q_max {
        let z = (-2.0 * t * q as f64).exp();
        let term = |p: u64| dim_f64(n, p, q) * (-2.0 * t * q as f64 * (p as f64 + m)).exp();
        let mut current = term(0);
        let mut p = 0u64;
        loop {
            sum.add(current);
            terms += 1;
            if terms > opts.term_cap {
                return Err(cap_error("G (direct)", opts.term_cap, t));
            }
            let next = term(p + 1);
            let rho = z * dim_ratio_bound(n, p + 1, q);
            let tail = geometric_tail(1.0, next, rho);
            if tail <= row_target {
                bound += tail;
                break;
            }
            current = next;
            p += 1;
        }
    }
    Ok(HeatTraceSample { t, value: sum.value(), truncation_bound: bound, terms_used: terms })
}

/// `G(t) = G1(t) + G2(t)` with the summed truncation bound.
pub fn heat_trace(n: u32, t: f64) -> Result<HeatTraceSample> {
    heat_trace_with(n, t, &HeatTraceOptions::default())
}

pub fn heat_trace_with(n: u32, t: f64, opts: &HeatTraceOptions) -> Result<HeatTraceSample> {
    let a = g1_with(n, t, opts)?;
    let b = g2_with(n, t, opts)?;
    Ok(HeatTraceSample {
        t,
        value: a.value + b.value,
        truncation_bound: a.truncation_bound + b.truncation_bound,
        terms_used: a.terms_used + b.terms_used,
    })
}

/// `t^n G(t)`, which tends to `Gamma(n+1)` times the Weyl coefficient as `t -> 0+`.
pub fn scaled_trace(n: u32, t: f64) -> Result<f64> {
    scaled_trace_with(n, t, &HeatTraceOptions::default())
}

pub fn scaled_trace_with(n: u32, t: f64, opts: &HeatTraceOptions) -> Result<f64> {
    Ok(t.powi(n as i32) * heat_trace_with(n, t, opts)?.value)
}
