//! The Weyl coefficient `c(n) = lim N(lambda) / lambda^n`, computed four ways.
//!
//! * [`series_direct`]: partial sum of `(1/(2^n n!)) sum_q P(q)/q^n` with a
//!   certified `O(1/Q)` tail.
//! * [`series_zeta`]: the same series resolved exactly into even zeta values.
//! * [`integral_coefficient`]: the `(t / sinh t)^n` integral over the real line.
//! * [`integral_intermediate`]: the heat-trace limit integral before
//!   integration by parts, divided by `Gamma(n+1)`.
//!
//! [`reconcile`] runs all four and compares them pairwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{rational_to_f64, series_polynomial, Rational};
use crate::error::{require_dimension, Error, Result};
use crate::special::{
    excess_power, factorial, scaled_integral, sphere_volume, x_over_exp_minus_one,
    x_over_one_minus_exp, zeta_even, CompensatedSum, DEFAULT_NODE_CAP, MAX_ZETA_ARGUMENT,
};

/// Default absolute tolerance of the quadrature methods.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default number of terms for [`series_direct`].
pub const DEFAULT_DIRECT_TERMS: u64 = 1_000_000;
/// Largest dimension accepted by the coefficient methods.
pub const MAX_DIMENSION: u32 = MAX_ZETA_ARGUMENT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    SeriesDirect,
    SeriesZeta,
    Integral,
    IntegralIntermediate,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::SeriesZeta, Method::Integral, Method::IntegralIntermediate, Method::SeriesDirect];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::SeriesDirect => "series-direct",
            Method::SeriesZeta => "series-zeta",
            Method::Integral => "integral",
            Method::IntegralIntermediate => "integral-intermediate",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series-direct" => Ok(Method::SeriesDirect),
            "series-zeta" => Ok(Method::SeriesZeta),
            "integral" => Ok(Method::Integral),
            "integral-intermediate" | "intermediate" => Ok(Method::IntegralIntermediate),
            other => Err(Error::invalid(format!("unknown method '{other}'"))),
        }
    }
}

/// Exact representation `prefactor * sum_k a_k zeta(s_k)` with rational
/// `prefactor` and `a_k` and even arguments `s_k`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaCombination {
    pub prefactor: Rational,
    pub terms: Vec<(Rational, u32)>,
}

impl ZetaCombination {
    pub fn arguments(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.iter().map(|&(_, s)| s)
    }

    /// Exact rational coefficients of `pi^s`, one per term, ascending in `s`
    /// and including the prefactor.
    pub fn pi_powers(&self) -> Result<Vec<(Rational, u32)>> {
        self.terms
            .iter()
            .map(|(a, s)| Ok((&self.prefactor * a * zeta_even(*s)?.pi_multiple, *s)))
            .collect()
    }
}

impl fmt::Display for ZetaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·(", self.prefactor)?;
        for (i, (a, s)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if a.is_negative() { " - " } else { " + " })?;
            } else if a.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}·ζ({s})", a.abs())?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    pub n: u32,
    pub value: f64,
    pub error_bound: f64,
    pub method: Method,
    /// Series terms or integrand evaluations.
    pub work: u64,
    pub exact_form: Option<ZetaCombination>,
}

fn check_dimension(n: u32) -> Result<()> {
    require_dimension(n as i64, 2)?;
    if n > MAX_DIMENSION {
        return Err(Error::invalid(format!("n = {n} exceeds the supported maximum {MAX_DIMENSION}")));
    }
    Ok(())
}

/// `1 / (2^n n!)`.
fn series_prefactor(n: u32) -> f64 {
    1.0 / (2f64.powi(n as i32) * factorial(n))
}

/// `binom(q + k, k) / q^k`, as the product `prod_{i<=k} (q + i) / (i q)`.
fn rising_ratio(q: f64, k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (q + i as f64) / (i as f64 * q))
}

/// `binom(q - 1, k) / q^k`.
fn falling_ratio(q: f64, k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (q - i as f64) / (i as f64 * q))
}

/// Partial sum of the coefficient series through `q = terms`.
///
/// For `q > Q` each term is `P(q)/q^n = (P(q)/q^(n-2)) / q^2` with
/// `P(q)/q^(n-2) <= C_Q = (2/(n-2)!) (1 + (n-2)/(Q+1))^(n-2)`, and
/// `sum_{q>Q} 1/q^2 < 1/Q`, so the remainder is below `C_Q / (2^n n! Q)`.
/// The reported bound adds that tail to a rounding allowance.
pub fn series_direct(n: u32, terms: u64) -> Result<CoefficientEstimate> {
    check_dimension(n)?;
    if terms == 0 {
        return Err(Error::invalid("series_direct needs at least one term"));
    }
    let k = n - 2;
    let mut sum = CompensatedSum::new();
    for q in 1..=terms {
        let qf = q as f64;
        sum.add((rising_ratio(qf, k) + falling_ratio(qf, k)) / (qf * qf));
    }
    let pre = series_prefactor(n);
    let value = pre * sum.value();

    let big_q = terms as f64;
    let envelope = 2.0 / factorial(k) * (1.0 + k as f64 / (big_q + 1.0)).powi(k as i32);
    let tail = pre * envelope / big_q;
    let rounding = (2 * k + 8) as f64 * f64::EPSILON * value;
    Ok(CoefficientEstimate {
        n,
        value,
        error_bound: tail + rounding,
        method: Method::SeriesDirect,
        work: terms,
        exact_form: None,
    })
}

/// The zeta combination for `c(n)`, read off the exact expansion of `P`.
pub fn zeta_combination(n: u32) -> Result<ZetaCombination> {
    check_dimension(n)?;
    let poly = series_polynomial(n)?;
    let mut terms = Vec::new();
    for (j, a) in poly.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let s = n - j as u32;
        if s % 2 != 0 {
            return Err(Error::NonFinite(format!("odd zeta argument {s} in the expansion for n = {n}")));
        }
        terms.push((a.clone(), s));
    }
    terms.sort_by_key(|&(_, s)| s);
    let mut denominator = BigInt::one() << n;
    for i in 2..=n {
        denominator *= i;
    }
    Ok(ZetaCombination { prefactor: Rational::new(BigInt::one(), denominator), terms })
}

/// Closed form of `c(n)` as a rational combination of even zeta values.
pub fn series_zeta(n: u32) -> Result<CoefficientEstimate> {
    let combination = zeta_combination(n)?;
    let mut sum = CompensatedSum::new();
    let mut magnitude = 0.0;
    for (a, s) in &combination.terms {
        let term = rational_to_f64(a) * zeta_even(*s)?.value;
        sum.add(term);
        magnitude += term.abs();
    }
    let pre = rational_to_f64(&combination.prefactor);
    let value = pre * sum.value();
    let error_bound = (combination.terms.len() as f64 + 4.0) * 2.0 * f64::EPSILON * pre * magnitude;
    Ok(CoefficientEstimate {
        n,
        value,
        error_bound,
        method: Method::SeriesZeta,
        work: combination.terms.len() as u64,
        exact_form: Some(combination),
    })
}

/// `2^(n-1) (t/(1 - e^(-2t)))^n (e^(-2t) + e^(-(2n-2)t))`, which equals
/// `(t / sinh t)^n cosh((n-2)t)` and is `1` at `t = 0`.
pub fn sinh_power_integrand(n: u32, t: f64) -> f64 {
    let base = x_over_one_minus_exp(t, 2.0);
    2f64.powi(n as i32 - 1)
        * base.powi(n as i32)
        * ((-2.0 * t).exp() + (-(2.0 * n as f64 - 2.0) * t).exp())
}

/// `c(n) = vol(S^(2n-1)) (n-1) / (n (2 pi)^n n!) * integral over R of (t/sinh t)^n e^(-(n-2)t)`,
/// folded onto `(0, inf)` with the even part `cosh((n-2)t)`.
pub fn integral_coefficient(n: u32, tol: f64) -> Result<CoefficientEstimate> {
    check_dimension(n)?;
    let nf = n as f64;
    let prefactor = 2.0 * sphere_volume(n)? * (nf - 1.0)
        / (nf * (2.0 * std::f64::consts::PI).powi(n as i32) * factorial(n));
    let quad = scaled_integral(|t| sinh_power_integrand(n, t), 2.0, tol, prefactor, DEFAULT_NODE_CAP)?;
    Ok(CoefficientEstimate {
        n,
        value: prefactor * quad.value,
        error_bound: prefactor * quad.error_estimate,
        method: Method::Integral,
        work: quad.nodes_used as u64,
        exact_form: None,
    })
}

/// `x^(n-1) ((1 - e^(-2x))^(-(n-1)) - 1 + (e^(2x) - 1)^(-(n-1)))`, finite at
/// `x = 0` where it equals `2^(2-n)`.
pub fn intermediate_integrand(n: u32, x: f64) -> f64 {
    let m = n - 1;
    excess_power(x, m) + x_over_exp_minus_one(x, 2.0).powi(m as i32)
}

/// `x^n ((1 - e^(-2x))^(-(n-1)) - 1 + (e^(2x) - 1)^(-(n-1)))`, the boundary term
/// discarded by integrating the intermediate form by parts.
pub fn intermediate_boundary_term(n: u32, x: f64) -> f64 {
    x * intermediate_integrand(n, x)
}

/// `c(n) = (1/((n-1)! n!)) * integral_0^inf of` [`intermediate_integrand`].
pub fn integral_intermediate(n: u32, tol: f64) -> Result<CoefficientEstimate> {
    check_dimension(n)?;
    let prefactor = 1.0 / (factorial(n - 1) * factorial(n));
    let quad = scaled_integral(|x| intermediate_integrand(n, x), 2.0, tol, prefactor, DEFAULT_NODE_CAP)?;
    Ok(CoefficientEstimate {
        n,
        value: prefactor * quad.value,
        error_bound: prefactor * quad.error_estimate,
        method: Method::IntegralIntermediate,
        work: quad.nodes_used as u64,
        exact_form: None,
    })
}

/// Runs one method with the given settings.
pub fn estimate(n: u32, method: Method, tol: f64, terms: u64) -> Result<CoefficientEstimate> {
    match method {
        Method::SeriesDirect => series_direct(n, terms),
        Method::SeriesZeta => series_zeta(n),
        Method::Integral => integral_coefficient(n, tol),
        Method::IntegralIntermediate => integral_intermediate(n, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconcileOptions {
    pub tol: f64,
    pub direct_terms: u64,
}

impl Default for ReconcileOptions {
    fn default() -> Self {
        ReconcileOptions { tol: DEFAULT_TOL, direct_terms: DEFAULT_DIRECT_TERMS }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseDifference {
    pub first: Method,
    pub second: Method,
    pub difference: f64,
    /// Sum of both error bounds plus a rounding allowance.
    pub allowed: f64,
}

impl PairwiseDifference {
    pub fn passed(&self) -> bool {
        self.difference <= self.allowed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconcileReport {
    pub n: u32,
    pub estimates: Vec<CoefficientEstimate>,
    pub failures: Vec<(Method, Error)>,
    pub pairs: Vec<PairwiseDifference>,
}

impl ReconcileReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pairs.iter().all(PairwiseDifference::passed)
    }

    pub fn max_difference(&self) -> f64 {
        self.pairs.iter().map(|p| p.difference).fold(0.0, f64::max)
    }

    pub fn estimate(&self, method: Method) -> Option<&CoefficientEstimate> {
        self.estimates.iter().find(|e| e.method == method)
    }
}

/// Runs every method and compares each pair against their combined bounds.
/// Method failures are collected in the report.
pub fn reconcile(n: u32) -> ReconcileReport {
    reconcile_with(n, &ReconcileOptions::default())
}

pub fn reconcile_with(n: u32, opts: &ReconcileOptions) -> ReconcileReport {
    let mut estimates = Vec::new();
    let mut failures = Vec::new();
    for method in Method::ALL {
        match estimate(n, method, opts.tol, opts.direct_terms) {
            Ok(e) => estimates.push(e),
            Err(err) => failures.push((method, err)),
        }
    }
    let mut pairs = Vec::new();
    for (i, a) in estimates.iter().enumerate() {
        for b in &estimates[i + 1..] {
            let rounding = 8.0 * f64::EPSILON * a.value.abs().max(b.value.abs());
            pairs.push(PairwiseDifference {
                first: a.method,
                second: b.method,
                difference: (a.value - b.value).abs(),
                allowed: a.error_bound + b.error_bound + rounding,
            });
        }
    }
    ReconcileReport { n, estimates, failures, pairs }
}
