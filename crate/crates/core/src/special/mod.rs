//! Numerical kernels: even zeta values, complex log-gamma, sphere volumes and a
//! half-line quadrature engine for exponentially decaying integrands.

mod gamma;
mod quadrature;
mod zeta;

pub use gamma::{binom_complex, log_gamma};
pub use quadrature::{
    integrate_decaying, integrate_decaying_complex, HalfLineQuadrature, QuadValue,
    QuadratureResult, DEFAULT_NODE_CAP,
};
pub use zeta::{bernoulli, zeta_even, EvenZeta, MAX_ZETA_ARGUMENT};

use std::f64::consts::PI;

use crate::error::{require_dimension, Error, Result};

/// Volume of the unit sphere `S^(2n-1)`, `2 pi^n / (n-1)!`.
pub fn sphere_volume(n: u32) -> Result<f64> {
    require_dimension(n as i64, 2)?;
    Ok(2.0 * PI.powi(n as i32) / factorial(n - 1))
}

/// `k!` in double precision (exact up to `22!`).
pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `x / (1 - e^(-a x))` for `x >= 0`, with the limit `1/a` at zero.
#[inline]
pub(crate) fn x_over_one_minus_exp(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        1.0 / a
    } else {
        -x / (-a * x).exp_m1()
    }
}

/// `x / (e^(a x) - 1)` for `x >= 0`, with the limit `1/a` at zero.
#[inline]
pub(crate) fn x_over_exp_minus_one(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        1.0 / a
    } else {
        x / (a * x).exp_m1()
    }
}

/// `(x / (1 - e^(-2x)))^m - x^m` for `x >= 0`.
///
/// Below `x = 1` the two powers are of different size and are subtracted
/// directly; above it the difference is `x^m ((1 - e^(-2x))^(-m) - 1)`,
/// evaluated through `expm1` and `ln_1p`.
pub(crate) fn excess_power(x: f64, m: u32) -> f64 {
    if x < 1.0 {
        x_over_one_minus_exp(x, 2.0).powi(m as i32) - x.powi(m as i32)
    } else {
        x.powi(m as i32) * (-(m as f64) * (-(-2.0 * x).exp()).ln_1p()).exp_m1()
    }
}

/// Integral of `f` over `(0, inf)` scaled by `prefactor`, accurate to `tol`
/// after scaling and to roughly twelve significant digits.
///
/// Returns the unscaled quadrature result; the caller multiplies by the
/// prefactor.
pub(crate) fn scaled_integral<T, F>(
    f: F,
    decay_rate: f64,
    tol: f64,
    prefactor: f64,
    node_cap: usize,
) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let scale = prefactor.abs();
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::NonFinite(format!("integral prefactor {prefactor}")));
    }
    let engine = HalfLineQuadrature::new(tol / scale).with_rel_tol(0.0).with_node_cap(node_cap);
    let first = engine.integrate(&f, decay_rate)?;
    let relative = RELATIVE_TARGET * first.value.magnitude();
    if relative >= tol / scale || relative == 0.0 {
        return Ok(first);
    }
    let mut second = HalfLineQuadrature { abs_tol: relative, ..engine }.integrate(&f, decay_rate)?;
    second.nodes_used += first.nodes_used;
    Ok(second)
}

/// [`excess_power`] times `e^(2x)`, which tends to `m x^m` as `x -> inf`.
pub(crate) fn excess_power_scaled(x: f64, m: u32) -> f64 {
    if x < 1.0 {
        return excess_power(x, m) * (2.0 * x).exp();
    }
    let u = (-2.0 * x).exp();
    let xm = x.powi(m as i32);
    if u == 0.0 {
        xm * m as f64
    } else {
        xm * (-(m as f64) * (-u).ln_1p()).exp_m1() / u
    }
}

const RELATIVE_TARGET: f64 = 1e-12;
/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volume_examples() {
        assert!((sphere_volume(2).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_volume(3).unwrap() - PI.powi(3)).abs() < 1e-13);
        assert!((sphere_volume(4).unwrap() - PI.powi(4) / 3.0).abs() < 1e-13);
        assert!((sphere_volume(2).unwrap() - 19.7392088).abs() < 1e-7);
        assert!((sphere_volume(3).unwrap() - 31.00627668).abs() < 1e-8);
        assert!(sphere_volume(1).is_err());
    }

    #[test]
    fn stable_ratios_have_correct_limits() {
        assert_eq!(x_over_one_minus_exp(0.0, 2.0), 0.5);
        assert_eq!(x_over_exp_minus_one(0.0, 2.0), 0.5);
        let x = 1e-12;
        assert!((x_over_one_minus_exp(x, 2.0) - 0.5).abs() < 1e-11);
        assert!((x_over_exp_minus_one(x, 2.0) - 0.5).abs() < 1e-11);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-13).abs() < 1e-20);
    }
}
