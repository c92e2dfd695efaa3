//! Exact integer and rational combinatorics.
//!
//! Binomial coefficients follow the standard convention: `binom(a, b)` is zero
//! whenever `b < 0`, `b > a` or `a < 0`, and `binom(0, 0) = 1`. With this
//! convention the split identity
//!
//! ```text
//! dim H_{p,q} = binom(n+p-1, p) binom(n+q-2, q) + binom(n+p-2, p) binom(n+q-2, q-1)
//! ```
//!
//! holds for every `n >= 2`, `p >= 0`, `q >= 1`, including the corner `n = 2`.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{require_dimension, Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Binomial coefficient with the standard convention (zero outside `0 <= b <= a`).
pub fn binom(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let k = b.min(a - b) as u64;
    let a = a as u64;
    if let Some(v) = binom_u128(a, k) {
        return BigUint::from(v);
    }
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= a - k + i;
        acc /= i;
    }
    acc
}

/// `binom(a, k)` for `k <= a` in 128-bit arithmetic, `None` on overflow.
fn binom_u128(a: u64, k: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        let factor = (a - k) as u128 + i;
        // acc * factor / i is exact because acc * factor = i * binom(a-k+i, i).
        let g = acc.gcd(&i);
        let (acc_r, i_r) = (acc / g, i / g);
        acc = acc_r.checked_mul(factor / i_r)?;
    }
    Some(acc)
}

/// Binomial coefficient as a double, via the product form `prod (a-k+i)/i`.
///
/// Uses the same convention as [`binom`]. Accurate to a few ulps for `b` up to
/// a few dozen, which covers every call site in this crate.
pub fn binom_f64(a: i64, b: i64) -> f64 {
    if a < 0 || b < 0 || b > a {
        return 0.0;
    }
    let k = b.min(a - b);
    let base = (a - k) as f64;
    (1..=k).fold(1.0, |acc, i| acc * (base + i as f64) / i as f64)
}

/// Dimension of the space of spherical harmonics of bidegree `(p, q)` on `S^(2n-1)`.
pub fn dim_hpq(n: i64, p: i64, q: i64) -> Result<BigUint> {
    require_dimension(n, 2)?;
    if p < 0 || q < 0 {
        return Err(Error::invalid(format!("bidegree must be nonnegative, got ({p}, {q})")));
    }
    let plus = binom(n + p - 1, p) * binom(n + q - 1, q);
    let minus = binom(n + p - 2, p - 1) * binom(n + q - 2, q - 1);
    Ok(plus - minus)
}

/// The two positive pieces of `dim H_{p,q}` obtained from Pascal's rule:
/// `(binom(n+p-1,p) binom(n+q-2,q), binom(n+p-2,p) binom(n+q-2,q-1))`.
pub fn split_terms(n: i64, p: i64, q: i64) -> Result<(BigUint, BigUint)> {
    require_dimension(n, 2)?;
    if p < 0 {
        return Err(Error::invalid(format!("p must be nonnegative, got {p}")));
    }
    if q < 1 {
        return Err(Error::invalid(format!("the split identity needs q >= 1, got {q}")));
    }
    let first = binom(n + p - 1, p) * binom(n + q - 2, q);
    let second = binom(n + p - 2, p) * binom(n + q - 2, q - 1);
    Ok((first, second))
}

/// Polynomial in one variable with exact rational coefficients.
///
/// `coeffs[i]` multiplies `x^i`. The highest stored coefficient is nonzero
/// unless the polynomial is zero, in which case no coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Builds a polynomial from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^power` (zero past the degree).
    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by the linear factor `(x + c)`.
    pub fn mul_linear(&self, c: &Rational) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + 1] += a;
            out[i] += a * c;
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * s).collect())
    }

    /// Horner evaluation at an exact rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(x)))
    }

    /// Evaluation in double precision (coefficients rounded first).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + rational_to_f64(a))
    }

    /// The polynomial `P(-x)`.
    pub fn reflect(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { -a.clone() } else { a.clone() })
                .collect(),
        )
    }

    /// True when every coefficient of a power with parity opposite to `parity` vanishes,
    /// i.e. `P(-x) = (-1)^parity P(x)`.
    pub fn has_parity(&self, parity: u32) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, a)| (i as u32 + parity) % 2 == 0 || a.is_zero())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly::from_coeffs(self.coeffs.iter().map(|a| -a.clone()).collect())
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = a.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}·")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Expands `binom(x + offset, degree)` as an exact polynomial in `x`:
/// `(x+offset)(x+offset-1)...(x+offset-degree+1) / degree!`.
///
/// Agrees with [`binom`] at every integer `x >= max(0, -offset)`.
pub fn binom_as_poly(offset: i64, degree: i64) -> Result<RationalPoly> {
    if degree < 0 {
        return Err(Error::invalid(format!("degree must be nonnegative, got {degree}")));
    }
    let mut poly = RationalPoly::constant(Rational::one());
    let mut factorial = BigInt::one();
    for i in 0..degree {
        poly = poly.mul_linear(&Rational::from_integer(BigInt::from(offset - i)));
        factorial *= i + 1;
    }
    Ok(poly.scale(&Rational::new(BigInt::one(), factorial)))
}

/// The polynomial `P(q) = binom(n+q-2, n-2) + binom(q-1, n-2)` whose values
/// `P(q)/q^n` are the terms of the Weyl coefficient series.
///
/// `P(-x) = (-1)^n P(x)`, so only even zeta values appear in the closed form.
pub fn series_polynomial(n: u32) -> Result<RationalPoly> {
    require_dimension(n as i64, 2)?;
    let k = n as i64 - 2;
    Ok(&binom_as_poly(k, k)? + &binom_as_poly(-1, k)?)
}

/// Scaled ceiling `alpha * ceil(x / alpha)`: for `alpha > 0` this is `x` rounded
/// up to the nearest integral multiple of `alpha`.
pub fn sceil(x: f64, alpha: f64) -> Result<f64> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::invalid(format!("scaled ceiling needs a finite nonzero alpha, got {alpha}")));
    }
    if !x.is_finite() {
        return Err(Error::invalid(format!("scaled ceiling needs a finite x, got {x}")));
    }
    let k = (x / alpha).ceil();
    let s = alpha * k;
    if alpha > 0.0 {
        // Rounding in the product can leave the result one ulp on the wrong side.
        if s < x {
            return Ok(alpha * (k + 1.0));
        }
        if s - x >= alpha {
            return Ok(alpha * (k - 1.0));
        }
    }
    Ok(s)
}

/// Correctly rounded conversion of an exact rational to `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2), big(10));
        assert_eq!(binom(0, 0), big(1));
        assert_eq!(binom(3, 5), big(0));
        assert_eq!(binom(-1, 0), big(0));
        assert_eq!(binom(4, -1), big(0));
    }

    #[test]
    fn binom_large_falls_back_to_bignum() {
        // binom(200, 100) overflows u128.
        let v = binom(200, 100);
        assert_eq!(
            v.to_string(),
            "90548514656103281165404177077484163874504589675413336841320"
        );
    }

    #[test]
    fn binom_pascal_recursion() {
        for a in 1..=60 {
            for b in 1..=a {
                assert_eq!(binom(a, b), binom(a - 1, b) + binom(a - 1, b - 1), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn binom_f64_matches_exact() {
        for a in 0..=60 {
            for b in 0..=a {
                let exact = binom(a, b).to_f64().unwrap();
                let approx = binom_f64(a, b);
                assert!((approx - exact).abs() <= 4.0 * f64::EPSILON * exact, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim_hpq(2, 0, 0).unwrap(), big(1));
        assert_eq!(dim_hpq(2, 1, 1).unwrap(), big(3));
        assert_eq!(dim_hpq(3, 0, 1).unwrap(), big(3));
    }

    #[test]
    fn dim_n2_closed_form() {
        // For n = 2 the formula collapses to p + q + 1.
        for p in 0..40 {
            for q in 0..40 {
                assert_eq!(dim_hpq(2, p, q).unwrap(), big((p + q + 1) as u64));
            }
        }
    }

    #[test]
    fn dim_rejects_bad_input() {
        assert!(matches!(dim_hpq(1, 0, 0), Err(Error::DimensionTooSmall { n: 1, min: 2 })));
        assert!(dim_hpq(3, -1, 0).is_err());
        assert!(dim_hpq(3, 0, -2).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_terms(2, 1, 1).unwrap(), (big(2), big(1)));
        assert_eq!(split_terms(2, 0, 1).unwrap(), (big(1), big(1)));
        assert_eq!(split_terms(4, 0, 1).unwrap(), (big(3), big(1)));
        assert!(split_terms(3, 2, 0).is_err());
    }

    #[test]
    fn split_identity_on_full_range() {
        for n in 2..=8 {
            for p in 0..=30 {
                for q in 1..=30 {
                    let (a, b) = split_terms(n, p, q).unwrap();
                    assert_eq!(a + b, dim_hpq(n, p, q).unwrap(), "n={n} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn binom_as_poly_examples() {
        assert_eq!(binom_as_poly(0, 1).unwrap().coeffs(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(binom_as_poly(-1, 0).unwrap().coeffs(), &[rat(1, 1)]);
        let p = binom_as_poly(1, 2).unwrap();
        assert_eq!(p.coeffs(), &[rat(0, 1), rat(1, 2), rat(1, 2)]);
        for x in 0..=5 {
            assert_eq!(p.eval_int(x), Rational::from_integer(BigInt::from(binom(x + 1, 2))));
        }
        assert!(binom_as_poly(0, -1).is_err());
    }

    #[test]
    fn binom_as_poly_agrees_on_twenty_points() {
        for degree in 0..=12 {
            for offset in -15..=15 {
                let poly = binom_as_poly(offset, degree).unwrap();
                assert_eq!(poly.degree(), Some(degree as usize));
                let start = 0.max(-offset);
                for x in start..start + 20 {
                    let expected = Rational::from_integer(BigInt::from(binom(x + offset, degree)));
                    assert_eq!(poly.eval_int(x), expected, "offset={offset} degree={degree} x={x}");
                }
            }
        }
    }

    #[test]
    fn series_polynomial_hand_expansions() {
        assert_eq!(series_polynomial(2).unwrap().coeffs(), &[rat(2, 1)]);
        assert_eq!(series_polynomial(3).unwrap().coeffs(), &[rat(0, 1), rat(2, 1)]);
        assert_eq!(
            series_polynomial(4).unwrap().coeffs(),
            &[rat(2, 1), rat(0, 1), rat(1, 1)]
        );
        assert_eq!(
            series_polynomial(5).unwrap().coeffs(),
            &[rat(0, 1), rat(11, 3), rat(0, 1), rat(1, 3)]
        );
    }

    #[test]
    fn series_polynomial_parity() {
        for n in 2..=24u32 {
            let p = series_polynomial(n).unwrap();
            assert!(p.has_parity(n), "n={n}: {p}");
            let expected = if n % 2 == 0 { p.clone() } else { -&p };
            assert_eq!(p.reflect(), expected);
        }
    }

    #[test]
    fn series_polynomial_matches_binomials_at_positive_integers() {
        for n in 2..=10u32 {
            let poly = series_polynomial(n).unwrap();
            let k = n as i64 - 2;
            for q in 1..=40 {
                let direct = binom(k + q, k) + binom(q - 1, k);
                assert_eq!(poly.eval_int(q), Rational::from_integer(BigInt::from(direct)));
            }
        }
    }

    #[test]
    fn poly_display() {
        assert_eq!(binom_as_poly(1, 2).unwrap().to_string(), "1/2·x^2 + 1/2·x");
        assert_eq!(series_polynomial(4).unwrap().to_string(), "x^2 + 2");
        assert_eq!(RationalPoly::zero().to_string(), "0");
        let p = RationalPoly::from_coeffs(vec![rat(-3, 2), rat(-1, 1)]);
        assert_eq!(p.to_string(), "-x - 3/2");
    }

    #[test]
    fn poly_product_matches_repeated_linear_factors() {
        let a = binom_as_poly(3, 2).unwrap();
        let b = binom_as_poly(-2, 3).unwrap();
        let prod = &a * &b;
        for x in 2..12 {
            assert_eq!(prod.eval_int(x), a.eval_int(x) * b.eval_int(x));
        }
    }

    #[test]
    fn sceil_examples() {
        assert_eq!(sceil(7.0, 3.0).unwrap(), 9.0);
        assert_eq!(sceil(6.0, 2.0).unwrap(), 6.0);
        assert_eq!(sceil(1.5, 0.5).unwrap(), 1.5);
        assert_eq!(sceil(-2.5, 1.0).unwrap(), -2.0);
        assert!(sceil(1.0, 0.0).is_err());
        assert!(sceil(f64::NAN, 1.0).is_err());
    }
}
