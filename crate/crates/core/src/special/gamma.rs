use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::combinatorics::binom;
use crate::error::{Error, Result};

// Lanczos approximation with g = 7 and nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

fn lanczos_log_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Wraps an imaginary part into `(-pi, pi]`.
fn principal(w: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    let mut im = w.im - two_pi * (w.im / two_pi).round();
    if im <= -PI {
        im += two_pi;
    } else if im > PI {
        im -= two_pi;
    }
    Complex64::new(w.re, im)
}

/// Principal logarithm of `Gamma(z)`: the returned `w` satisfies `exp(w) = Gamma(z)`
/// with `Im w` in `(-pi, pi]`.
///
/// Lanczos approximation for `Re z >= 1/2`, reflection
/// `Gamma(z) Gamma(1-z) = pi / sin(pi z)` otherwise.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(format!("log_gamma argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("Gamma has a pole at z = {}", z.re)));
    }
    let w = if z.re < 0.5 {
        let s = (PI * z).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - lanczos_log_gamma(1.0 - z)
    } else {
        lanczos_log_gamma(z)
    };
    Ok(principal(w))
}

/// `binom(m, q) = m! / (Gamma(q+1) Gamma(m-q+1))` for complex `q`.
///
/// Exact for integer `q` in `[0, m]`; zero where either Gamma factor has a pole.
pub fn binom_complex(m: u32, q: Complex64) -> Result<Complex64> {
    if q.im == 0.0 && q.re == q.re.floor() && q.re.abs() <= u32::MAX as f64 {
        let k = q.re as i64;
        let exact = binom(m as i64, k).to_f64().unwrap_or(f64::INFINITY);
        return Ok(Complex64::new(exact, 0.0));
    }
    let lhs = q + 1.0;
    let rhs = (m as f64 + 1.0) - q;
    if is_nonpositive_integer(lhs) || is_nonpositive_integer(rhs) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log_m_fact = log_gamma(Complex64::new(m as f64 + 1.0, 0.0))?;
    Ok((log_m_fact - log_gamma(lhs)? - log_gamma(rhs)?).exp())
}
