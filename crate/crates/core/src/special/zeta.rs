use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binom, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Largest even argument accepted by [`zeta_even`].
pub const MAX_ZETA_ARGUMENT: u32 = 64;

/// `zeta(k)` for an even `k`, together with the exact rational `r` such that
/// `zeta(k) = r * pi^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenZeta {
    pub k: u32,
    pub value: f64,
    pub pi_multiple: Rational,
}

/// Bernoulli numbers `B_0 .. B_64` (convention `B_1 = -1/2`).
fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let len = MAX_ZETA_ARGUMENT as usize + 1;
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(Rational::one());
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        for m in 1..len {
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from_integer(BigInt::from(binom(m as i64 + 1, j as i64))) * bj;
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Bernoulli number `B_k` for `k <= 64`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    bernoulli_table()
        .get(k as usize)
        .cloned()
        .ok_or_else(|| Error::invalid(format!("Bernoulli index {k} exceeds {MAX_ZETA_ARGUMENT}")))
}

/// Riemann zeta at an even integer `2 <= k <= 64` from the Bernoulli closed form
/// `zeta(k) = (-1)^(k/2+1) B_k (2 pi)^k / (2 k!)`.
pub fn zeta_even(k: u32) -> Result<EvenZeta> {
    if k % 2 != 0 || !(2..=MAX_ZETA_ARGUMENT).contains(&k) {
        return Err(Error::invalid(format!(
            "zeta_even needs an even argument in [2, {MAX_ZETA_ARGUMENT}], got {k}"
        )));
    }
    let b = bernoulli(k)?;
    let mut factorial = BigInt::one();
    for i in 2..=k {
        factorial *= i;
    }
    let two_pow = BigInt::one() << k;
    // (-1)^(k/2+1) B_k is positive for every even k >= 2.
    let r = b.abs() * Rational::new(two_pow, factorial * 2);
    let value = rational_to_f64(&r) * PI.powi(k as i32);
    Ok(EvenZeta { k, value, pi_multiple: r })
}
