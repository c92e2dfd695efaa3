//! The form-level coefficient function `f(q)` of the sphere, its continuation
//! `g(q)` past `Re q = 0`, and the explicit pole term `f - g`.
//!
//! With `m = n - 1` and `K = vol(S^(2n-1)) / ((2 pi)^n n!)`:
//!
//! ```text
//! f(q) = 2 binom(m, q) K  int_0^inf (tau / sinh tau)^m cosh((m - 2q) tau) dtau,   0 < Re q < m
//! g(q) = 2 binom(m, q) K  h(q),                                                   -1 < Re q < m
//! h(q) = int_0^inf tau^m (cosh((m - 2q) tau) / sinh(tau)^m - 2^(m-1) e^(-2q tau)) dtau
//! ```
//!
//! Both integrands are evaluated in the form
//! `2^(m-1) (tau / (1 - e^(-2 tau)))^m (e^(-2q tau) + e^(-(2m - 2q) tau))`, with the
//! `e^(-2q tau)` part of `h` reduced to the stable difference
//! `(tau / (1 - e^(-2 tau)))^m - tau^m`.
//!
//! On the overlap `f - g = 2^m binom(m, q) K int tau^m e^(-2q tau) dtau`, and
//! since that integral is `Gamma(m+1) / (2q)^(m+1)`,
//! `f(q) - g(q) = binom(n-1, q) vol(S^(2n-1)) / (2n (2 pi)^n q^n)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficients::MAX_DIMENSION;
use crate::error::{require_dimension, Error, Result};
use crate::special::{
    binom_complex, excess_power_scaled, factorial, scaled_integral, sphere_volume, x_over_one_minus_exp,
    DEFAULT_NODE_CAP,
};

/// `f` is not evaluated closer than this to the pole at `q = 0`.
pub const POLE_EXCLUSION_RADIUS: f64 = 0.05;

/// A point `q` of the complex plane together with the dimension `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    q: Complex64,
    n: u32,
    m: u32,
}

impl StripPoint {
    pub fn new(n: u32, q: Complex64) -> Result<Self> {
        require_dimension(n as i64, 3)?;
        if n > MAX_DIMENSION {
            return Err(Error::invalid(format!("n = {n} exceeds the supported maximum {MAX_DIMENSION}")));
        }
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::invalid(format!("q must be finite, got {q}")));
        }
        Ok(StripPoint { q, n, m: n - 1 })
    }

    pub fn real(n: u32, q: f64) -> Result<Self> {
        Self::new(n, Complex64::new(q, 0.0))
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// True when `0 < Re q < n - 1`, the domain of the defining integral of `f`.
    pub fn in_f_strip(&self) -> bool {
        self.q.re > 0.0 && self.q.re < self.m as f64
    }

    /// True when `-1 < Re q < n - 1`.
    pub fn in_g_strip(&self) -> bool {
        self.q.re > -1.0 && self.q.re < self.m as f64
    }

    fn require_strip(&self, lo: f64) -> Result<()> {
        let hi = self.m as f64;
        if self.q.re > lo && self.q.re < hi {
            Ok(())
        } else {
            Err(Error::OutOfStrip { re: self.q.re, im: self.q.im, lo, hi })
        }
    }

    /// `K = vol(S^(2n-1)) / ((2 pi)^n n!)`.
    fn volume_factor(&self) -> Result<f64> {
        Ok(sphere_volume(self.n)? / ((2.0 * PI).powi(self.n as i32) * factorial(self.n)))
    }
}

fn power_of_two(m: u32) -> f64 {
    2f64.powi(m as i32 - 1)
}

/// Integrand of `f` on `(0, inf)` before the `2 binom(m, q) K` prefactor.
fn f_integrand(m: u32, q: Complex64, tau: f64) -> Complex64 {
    let base = x_over_one_minus_exp(tau, 2.0).powi(m as i32);
    let near = (-2.0 * tau * q).exp();
    let far = (-2.0 * tau * (m as f64 - q)).exp();
    (near + far) * (power_of_two(m) * base)
}

/// Integrand of `h`.
fn h_integrand(m: u32, q: Complex64, tau: f64) -> Complex64 {
    let base = x_over_one_minus_exp(tau, 2.0).powi(m as i32);
    let near = (-2.0 * tau * (q + 1.0)).exp() * excess_power_scaled(tau, m);
    let far = (-2.0 * tau * (m as f64 - q)).exp() * base;
    (near + far) * power_of_two(m)
}

/// Evaluates `f(q)` from its defining integral to absolute accuracy `tol`.
pub fn f_st(point: &StripPoint, tol: f64) -> Result<Complex64> {
    point.require_strip(0.0)?;
    if point.q.norm() < POLE_EXCLUSION_RADIUS {
        return Err(Error::invalid(format!(
            "f is not evaluated within {POLE_EXCLUSION_RADIUS} of the pole at q = 0; use g_cont"
        )));
    }
    let (m, q) = (point.m, point.q);
    let prefactor = binom_complex(m, q)? * (2.0 * point.volume_factor()?);
    let decay = 2.0 * q.re.min(m as f64 - q.re);
    let quad = scaled_integral(|tau| f_integrand(m, q, tau), decay, tol, prefactor.norm(), DEFAULT_NODE_CAP)?;
    Ok(prefactor * quad.value)
}

/// `h(q)`, the regularized integral inside `g`.
pub fn regularized_integral(point: &StripPoint, tol: f64) -> Result<Complex64> {
    point.require_strip(-1.0)?;
    let (m, q) = (point.m, point.q);
    let decay = 2.0 * (q.re + 1.0).min(m as f64 - q.re);
    Ok(scaled_integral(|tau| h_integrand(m, q, tau), decay, tol, 1.0, DEFAULT_NODE_CAP)?.value)
}

/// The continuation `g(q)` on `-1 < Re q < n - 1`, to absolute accuracy `tol`.
pub fn g_cont(point: &StripPoint, tol: f64) -> Result<Complex64> {
    point.require_strip(-1.0)?;
    let (m, q) = (point.m, point.q);
    let prefactor = binom_complex(m, q)? * (2.0 * point.volume_factor()?);
    if prefactor.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let decay = 2.0 * (q.re + 1.0).min(m as f64 - q.re);
    let quad = scaled_integral(|tau| h_integrand(m, q, tau), decay, tol, prefactor.norm(), DEFAULT_NODE_CAP)?;
    Ok(prefactor * quad.value)
}

/// `f(q) - g(q) = binom(n-1, q) vol(S^(2n-1)) / (2n (2 pi)^n q^n)`.
pub fn pole_term(point: &StripPoint) -> Result<Complex64> {
    let q = point.q;
    if q.norm() == 0.0 {
        return Err(Error::Pole("q = 0".into()));
    }
    let n = point.n;
    let c = sphere_volume(n)? / (2.0 * n as f64 * (2.0 * PI).powi(n as i32));
    Ok(binom_complex(point.m, q)? * c / q.powi(n as i32))
}

/// `g(q) + (f - g)(q)`, the meromorphic continuation of `f` to `-1 < Re q < n - 1`.
pub fn continued_f(point: &StripPoint, tol: f64) -> Result<Complex64> {
    Ok(g_cont(point, tol)? + pole_term(point)?)
}

/// `|f(q) - g(q) - pole_term(q)|` on the overlap strip.
pub fn continuation_residual(point: &StripPoint, tol: f64) -> Result<f64> {
    let f = f_st(point, tol)?;
    let g = g_cont(point, tol)?;
    Ok((f - g - pole_term(point)?).norm())
}

/// `phi(beta) = int_0^inf e^(-2 beta tau) (tau / (1 - e^(-2 tau)))^m dtau`.
pub fn phi(beta: f64, m: u32, tol: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("phi needs beta > 0, got {beta}")));
    }
    if m == 0 {
        return Err(Error::invalid("phi needs m >= 1"));
    }
    let integrand = |tau: f64| (-2.0 * beta * tau).exp() * x_over_one_minus_exp(tau, 2.0).powi(m as i32);
    Ok(scaled_integral(integrand, 2.0 * beta, tol, 1.0, DEFAULT_NODE_CAP)?.value)
}

/// `2^(m-1) phi(m - Re q) + 2^(2m-1) phi(Re q + 1)`, an upper bound for the
/// `L^1` norm of the integrand of `h`.
pub fn regularized_bound(point: &StripPoint, tol: f64) -> Result<f64> {
    point.require_strip(-1.0)?;
    let (m, re) = (point.m, point.q.re);
    Ok(power_of_two(m) * phi(m as f64 - re, m, tol)?
        + 2f64.powi(2 * m as i32 - 1) * phi(re + 1.0, m, tol)?)
}
