//! Positive spectrum of the Kohn Laplacian on `S^(2n-1)` and its counting function.
//!
//! `H_{p,q}` is an eigenspace with eigenvalue `2q(p+n-1)`; the spaces with `q = 0`
//! form the kernel, so only `q >= 1` contributes to the positive spectrum.
//! Eigenvalues are even integers, so the test `2q(p+n-1) <= lambda` for a real
//! `lambda` is the exact integer test `q(p+n-1) <= floor(lambda / 2)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{binom, dim_hpq};
use crate::error::{require_dimension, Error, Result};

/// Default cap on the number of `(p, q)` lines an enumeration may touch.
pub const DEFAULT_LINE_CAP: u64 = 100_000_000;

/// A bidegree `(p, q)` with `q >= 1` on the sphere in `C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    n: u32,
    p: u64,
    q: u64,
}

impl ModeIndex {
    pub fn new(n: u32, p: u64, q: u64) -> Result<Self> {
        require_dimension(n as i64, 2)?;
        if q == 0 {
            return Err(Error::invalid("q = 0 modes lie in the kernel; q >= 1 required"));
        }
        Ok(ModeIndex { n, p, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn multiplicity(&self) -> BigUint {
        dim_hpq(self.n as i64, self.p as i64, self.q as i64).expect("validated mode index")
    }
}

/// One eigenspace: its bidegree, eigenvalue and multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralLine {
    pub mode: ModeIndex,
    pub eigenvalue: u128,
    pub multiplicity: BigUint,
}

/// The eigenvalue `2q(p+n-1)` of `H_{p,q}`.
pub fn eigenvalue(mode: ModeIndex) -> u128 {
    2 * mode.q as u128 * (mode.p as u128 + mode.n as u128 - 1)
}

/// Spectrum limits: `floor(lambda / 2)` as an integer plus the line cap.
#[derive(Debug, Clone, Copy)]
struct Window {
    n: u64,
    half_floor: u64,
    q_max: u64,
}

impl Window {
    fn new(n: u32, lambda: f64, cap: u64) -> Result<Self> {
        require_dimension(n as i64, 2)?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        // lambda / 2 is exact in binary floating point.
        let half = (lambda / 2.0).floor();
        if half >= u64::MAX as f64 {
            let needed = (half / (n - 1) as f64) as u128;
            return Err(Error::ResourceCap { what: "bidegree rows", needed, cap: cap as u128 });
        }
        let half_floor = half as u64;
        let n = n as u64;
        let q_max = half_floor / (n - 1);
        if q_max > cap {
            return Err(Error::ResourceCap { what: "bidegree rows", needed: q_max as u128, cap: cap as u128 });
        }
        Ok(Window { n, half_floor, q_max })
    }

    /// Largest admissible `p` for a given `q`, or `None` when no `p` fits.
    fn p_max(&self, q: u64) -> Option<u64> {
        (self.half_floor / q).checked_sub(self.n - 1)
    }

    fn line_count(&self) -> u128 {
        (1..=self.q_max).filter_map(|q| self.p_max(q)).map(|p| p as u128 + 1).sum()
    }

    fn check_cap(&self, cap: u64) -> Result<u128> {
        let lines = self.line_count();
        if lines > cap as u128 {
            return Err(Error::ResourceCap { what: "spectrum lines", needed: lines, cap: cap as u128 });
        }
        Ok(lines)
    }
}

/// Number of `(p, q)` lines with eigenvalue `<= lambda`. Visits at most
/// [`DEFAULT_LINE_CAP`] values of `q`.
pub fn line_count(n: u32, lambda: f64) -> Result<u128> {
    Ok(Window::new(n, lambda, DEFAULT_LINE_CAP)?.line_count())
}

/// Every spectral line with eigenvalue `<= lambda`, sorted by `(eigenvalue, q, p)`.
pub fn enumerate_modes(n: u32, lambda: f64) -> Result<Vec<SpectralLine>> {
    enumerate_modes_capped(n, lambda, DEFAULT_LINE_CAP)
}

pub fn enumerate_modes_capped(n: u32, lambda: f64, cap: u64) -> Result<Vec<SpectralLine>> {
    let window = Window::new(n, lambda, cap)?;
    let lines = window.check_cap(cap)?;
    let mut out = Vec::with_capacity(lines as usize);
    for q in 1..=window.q_max {
        let Some(p_max) = window.p_max(q) else { continue };
        for p in 0..=p_max {
            let mode = ModeIndex { n, p, q };
            out.push(SpectralLine { mode, eigenvalue: eigenvalue(mode), multiplicity: mode.multiplicity() });
        }
    }
    out.sort_by_key(|l| (l.eigenvalue, l.mode.q, l.mode.p));
    Ok(out)
}

/// Counting function `N(lambda)`: positive eigenvalues `<= lambda` with multiplicity.
pub fn count(n: u32, lambda: f64) -> Result<BigUint> {
    count_capped(n, lambda, DEFAULT_LINE_CAP)
}

/// [`count`] with an explicit cap on the number of `q` rows.
///
/// Each `q` row is summed in closed form with the hockey-stick identity
/// `sum_{p<=P} binom(k+p, p) = binom(k+P+1, P)`, so the row
/// `sum_{p<=P} dim H_{p,q}` equals
/// `binom(n+P, P) binom(n+q-1, q) - binom(n+P-1, P-1) binom(n+q-2, q-1)`.
pub fn count_capped(n: u32, lambda: f64, cap: u64) -> Result<BigUint> {
    let window = Window::new(n, lambda, cap)?;
    let ni = n as i64;
    let mut total = BigUint::zero();
    for q in 1..=window.q_max {
        let Some(p_max) = window.p_max(q) else { continue };
        let (pm, qi) = (p_max as i64, q as i64);
        let plus = binom(ni + pm, pm) * binom(ni + qi - 1, qi);
        let minus = binom(ni + pm - 1, pm - 1) * binom(ni + qi - 2, qi - 1);
        total += plus - minus;
    }
    Ok(total)
}

/// `N(lambda) / lambda^n` in double precision.
pub fn counting_ratio(n: u32, lambda: f64) -> Result<f64> {
    counting_ratio_capped(n, lambda, DEFAULT_LINE_CAP)
}

pub fn counting_ratio_capped(n: u32, lambda: f64, cap: u64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!("counting ratio needs lambda > 0, got {lambda}")));
    }
    let c = count_capped(n, lambda, cap)?;
    Ok(c.to_f64().unwrap_or(f64::INFINITY) / lambda.powi(n as i32))
}
