//! Certified quadrature on `(0, inf)` for integrands with an exponential tail.
//!
//! The half line is cut at a truncation point `T` chosen from the caller's decay
//! hint `r`: past `T` the integrand is assumed to satisfy
//! `|f(x)| <= G e^(-r (x - T) / 2)`, where `G` is the largest value of
//! `|f(x)| e^(r (x - T) / 2)` over 17 samples spread across `[T, 3T]`. The tail is
//! then bounded by `2 G / r`. Halving the rate absorbs polynomial prefactors
//! `x^s` once `T >= 2 s / r`, which the sampling checks empirically.
//!
//! `[0, T]` is integrated with adaptive bisection of 20-point Gauss-Legendre
//! panels. A panel is accepted when the one-panel and two-half-panel values
//! differ by less than its share of the tolerance, and that difference is
//! charged to the error estimate in full.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on integrand evaluations.
pub const DEFAULT_NODE_CAP: usize = 200_000;

const GL_ORDER: usize = 20;
const TAIL_SAMPLES: usize = 17;
const MAX_TRUNCATION_STEPS: usize = 20_000;

/// Values the engine can integrate: reals, and complex numbers handled as two
/// real quadratures sharing the same nodes.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + std::fmt::Debug
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Outcome of a half-line integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Tail bound plus the summed panel refinement differences.
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub truncation_point: f64,
}

/// Configuration of the half-line engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineQuadrature {
    pub abs_tol: f64,
    /// Relative tolerance measured against the integral of `|f|`; zero disables it.
    pub rel_tol: f64,
    pub node_cap: usize,
}

impl HalfLineQuadrature {
    pub fn new(abs_tol: f64) -> Self {
        HalfLineQuadrature { abs_tol, rel_tol: 0.0, node_cap: DEFAULT_NODE_CAP }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_node_cap(mut self, node_cap: usize) -> Self {
        self.node_cap = node_cap;
        self
    }

    /// Integrates `f` over `(0, inf)`. `f` must have a finite value at `0`
    /// (callers pass the algebraically stabilized form).
    pub fn integrate<T, F>(&self, f: F, decay_rate: f64) -> Result<QuadratureResult<T>>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        if !(decay_rate > 0.0 && decay_rate.is_finite()) {
            return Err(Error::invalid(format!("decay rate must be positive, got {decay_rate}")));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(format!("tolerance must be positive, got {}", self.abs_tol)));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid(format!("relative tolerance must be >= 0, got {}", self.rel_tol)));
        }
        if self.node_cap == 0 {
            return Err(Error::invalid("node cap must be positive"));
        }

        let eval = |x: f64| -> Result<T> {
            let v = f(x);
            if v.is_finite_value() {
                Ok(v)
            } else {
                Err(Error::NonFinite(format!("integrand value {v:?} at x = {x}")))
            }
        };

        let (truncation, tail_bound, mut nodes) = self.truncation_point(&eval, decay_rate)?;

        let (nodes_ref, weights_ref) = gauss_legendre_20();
        let panel = |a: f64, b: f64| -> Result<(T, f64)> {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut acc = T::zero();
            let mut abs_acc = 0.0;
            for (x, w) in nodes_ref.iter().zip(weights_ref) {
                let v = eval(mid + half * x)?;
                acc = acc + v * (w * half);
                abs_acc += v.magnitude() * w * half;
            }
            Ok((acc, abs_acc))
        };

        let initial = ((truncation * decay_rate / 2.0).ceil() as usize).clamp(4, 256);
        let width0 = truncation / initial as f64;
        let mut stack: Vec<(f64, f64, T)> = Vec::new();
        for i in (0..initial).rev() {
            let a = width0 * i as f64;
            let b = if i + 1 == initial { truncation } else { width0 * (i + 1) as f64 };
            let (v, _) = panel(a, b)?;
            nodes += GL_ORDER;
            stack.push((a, b, v));
        }

        let mut total = T::zero();
        let mut total_abs = 0.0;
        let mut refine_err = 0.0;
        let min_width = truncation * 1e-13;
        while let Some((a, b, coarse)) = stack.pop() {
            if nodes + 2 * GL_ORDER > self.node_cap {
                return Err(Error::NonConvergence(format!(
                    "quadrature node cap {} reached on [0, {truncation}]",
                    self.node_cap
                )));
            }
            let m = 0.5 * (a + b);
            let (left, left_abs) = panel(a, m)?;
            let (right, right_abs) = panel(m, b)?;
            nodes += 2 * GL_ORDER;
            let fine = left + right;
            let diff = (fine - coarse).magnitude();
            let local_tol =
                (0.5 * self.abs_tol * (b - a) / truncation).max(self.rel_tol * (left_abs + right_abs));
            if diff <= local_tol || b - a < min_width {
                total = total + fine;
                total_abs += left_abs + right_abs;
                refine_err += diff;
            } else {
                stack.push((m, b, right));
                stack.push((a, m, left));
            }
        }

        let error_estimate = tail_bound + refine_err;
        let allowed = self.abs_tol.max(self.rel_tol * total_abs);
        if error_estimate > allowed * (1.0 + 1e-9) {
            return Err(Error::NonConvergence(format!(
                "quadrature error estimate {error_estimate:e} exceeds tolerance {allowed:e}"
            )));
        }
        Ok(QuadratureResult { value: total, error_estimate, nodes_used: nodes, truncation_point: truncation })
    }

    /// Smallest `T` on the grid `k / r` (k >= 2) whose sampled tail bound is below `abs_tol / 2`.
    fn truncation_point<T, E>(&self, eval: &E, rate: f64) -> Result<(f64, f64, usize)>
    where
        T: QuadValue,
        E: Fn(f64) -> Result<T>,
    {
        let step = 1.0 / rate;
        let target = 0.5 * self.abs_tol;
        let mut nodes = 0;
        for k in 2..MAX_TRUNCATION_STEPS {
            let t = step * k as f64;
            let mut envelope: f64 = 0.0;
            for j in 0..TAIL_SAMPLES {
                let x = t * (1.0 + 2.0 * j as f64 / (TAIL_SAMPLES - 1) as f64);
                let v = eval(x)?.magnitude();
                envelope = envelope.max(v * (0.5 * rate * (x - t)).exp());
            }
            nodes += TAIL_SAMPLES;
            let bound = 2.0 * envelope / rate;
            if bound <= target {
                return Ok((t, bound, nodes));
            }
        }
        Err(Error::NonConvergence(format!(
            "no truncation point with tail below {target:e} for decay rate {rate}"
        )))
    }
}

/// Integrates a real integrand over `(0, inf)` to absolute tolerance `tol`.
pub fn integrate_decaying<F>(f: F, decay_rate: f64, tol: f64) -> Result<QuadratureResult<f64>>
where
    F: Fn(f64) -> f64,
{
    HalfLineQuadrature::new(tol).integrate(f, decay_rate)
}

/// Complex counterpart of [`integrate_decaying`].
pub fn integrate_decaying_complex<F>(
    f: F,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    HalfLineQuadrature::new(tol).integrate(f, decay_rate)
}

/// Nodes and weights of the 20-point Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre_20() -> (&'static [f64], &'static [f64]) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = RULE.get_or_init(|| gauss_legendre(GL_ORDER));
    (x, w)
}

/// Newton iteration on the Legendre polynomial `P_n`, started from the
/// Chebyshev-like guess `cos(pi (i - 1/4) / (n + 1/2))`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
