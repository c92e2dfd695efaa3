//! Spectrum of the Kohn Laplacian on functions on the sphere `S^(2n-1)`.
//!
//! The positive eigenvalues are `2q(p + n - 1)` for `q >= 1`, `p >= 0`, with
//! multiplicity `dim H_{p,q}`. This crate counts them, evaluates their heat
//! trace, computes the Weyl coefficient `lim N(lambda)/lambda^n` by several
//! independent routes and evaluates the analytic continuation of the
//! form-level coefficient function.

pub mod coefficients;
pub mod combinatorics;
pub mod continuation;
pub mod error;
pub mod heat_trace;
pub mod special;
pub mod spectrum;

pub use coefficients::{
    integral_coefficient, integral_intermediate, reconcile, series_direct, series_zeta,
    CoefficientEstimate, Method, ReconcileReport, ZetaCombination,
};
pub use combinatorics::{binom, binom_as_poly, dim_hpq, sceil, series_polynomial, RationalPoly};
pub use continuation::{continuation_residual, f_st, g_cont, phi, pole_term, StripPoint};
pub use error::{Error, Result};
pub use heat_trace::{g1, g2, g_direct, scaled_trace, HeatTraceOptions, HeatTraceSample};
pub use spectrum::{count, counting_ratio, enumerate_modes, eigenvalue, ModeIndex, SpectralLine};
