//! Spectra of two-dimensional periodic Jacobi operators.
//!
//! A 2D periodic Jacobi operator acts on `ℓ²(ℤ²)` viewed as a chain of layers:
//! layer `n` couples to layers `n±1` through 1D periodic Jacobi matrices `A_n`,
//! and within itself through a 1D periodic Jacobi matrix `B_n`,
//!
//! ```text
//! (J f)_n = A_n f_{n+1} + B_n f_n + A_{n-1}^* f_{n-1} ,
//! ```
//!
//! with coefficients doubly periodic with periods `(p1, p2)`. Such an operator
//! is unitarily equivalent to a direct integral of `p1·p2 × p1·p2` Hermitian
//! fiber matrices `J(x, y)` over quasimomenta `(x, y) ∈ [0, 2π)²`, so its
//! spectrum is the union of the band functions `λ_n(x, y)`.
//!
//! This crate assembles the fibers, computes their eigenvalues with a
//! deterministic dense Hermitian solver, and evaluates two kinds of spectral
//! estimates that need no momentum sweep at all:
//!
//! * band envelopes `λ_n^±` — eigenvalues of the momentum-independent
//!   matrices `J0 ∓ C` that bracket every band uniformly in `(x, y)`;
//! * upper bounds `r(α, β)` on the Lebesgue measure of the spectrum, together
//!   with a cruder operator-norm bound and a sharper bound for the
//!   diagonal-hopping (Schrödinger) case.
//!
//! Everything is cross-checked against a brute-force oracle: the operator
//! restricted to a finite torus of `N1×N2` periods, whose exact spectrum must
//! equal the pooled fiber spectra at the matching discrete momenta.
//!
//! Modules mirror that pipeline: [`coefficients`] (input data),
//! [`fiber`] (matrix assembly), [`eigen`] (eigenvalues), [`bounds`]
//! (envelopes and estimates), [`spectrum`] (momentum sweeps and interval
//! unions), [`oracle`] (torus verification).

pub mod bounds;
pub mod coefficients;
pub mod eigen;
pub mod fiber;
pub mod matrix;
pub mod oracle;
pub mod spectrum;

mod rng;

pub use bounds::{band_envelope, envelope_sum, norm_bound, r_min, r_value, BandEnvelope, BoundReport, RMin};
pub use coefficients::{CoefficientField, RawCoefficients};
pub use eigen::{hermitian_eigenvalues, min_eigenvalue, SpectrumList};
pub use fiber::{assemble_c, assemble_j, assemble_j0, assemble_j1, ComparisonDiagonal, FiberMatrix};
pub use matrix::ComplexMatrix;
pub use oracle::{build_torus, verify_direct_integral, DirectIntegralReport, TorusOperator};
pub use spectrum::{
    check_enclosure, check_sandwich, spectrum_estimate, sweep_bands, BandTable, Interval,
    IntervalSet, MomentumGrid,
};

/// Centralized relative tolerances. Every numerical claim made by this crate
/// scales one of these by `1 + (problem scale)`; nothing else hides a
/// tolerance inline.
pub mod tol {
    /// Allowed asymmetry `max|M_ij - conj(M_ji)|` relative to the largest
    /// entry before a matrix is rejected as non-Hermitian.
    pub const HERMITICITY_REL: f64 = 1e-12;
    /// Positive-semidefiniteness slack for the `C ± J1` sandwich checks.
    pub const PSD_REL: f64 = 1e-10;
    /// Slack for band-envelope enclosure of sampled band values.
    pub const ENCLOSURE_REL: f64 = 1e-9;
    /// Elementwise slack for the torus-vs-fibers multiset comparison.
    pub const DIRECT_INTEGRAL_REL: f64 = 1e-8;
    /// Slack for "measure ≤ bound" comparisons on grid estimates.
    pub const MEASURE_BOUND_REL: f64 = 1e-6;
    /// Gap below which adjacent intervals are fused when forming unions.
    /// Band edges attained at shared grid momenta agree only to rounding,
    /// so an exact-touch rule would split intervals that meet at a point.
    pub const INTERVAL_MERGE_REL: f64 = 1e-9;
    /// Slack for the trace identity chain `Σ(λ^+ - λ^-) = 2 Tr C = r(p1, p2)`.
    pub const TRACE_IDENTITY_REL: f64 = 1e-9;
}

/// Default run parameters shared by the CLI and the verification helpers.
pub mod defaults {
    /// Momentum grid resolution per axis.
    pub const GRID: usize = 64;
    /// Torus periods per direction for the direct-integral oracle.
    pub const TORUS: usize = 3;
    /// Seed for the sandwich check's momentum sampler.
    pub const SEED: u64 = 0;
    /// Number of sampled momenta in the sandwich check.
    pub const SANDWICH_SAMPLES: usize = 100;
    /// Largest torus matrix dimension the oracle will build.
    pub const DIMENSION_CAP: usize = 4096;
}

/// Errors shared across the crate. Variant names are stable and appear
/// verbatim in CLI diagnostics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("PeriodTooSmall: periods must satisfy p1 >= 3 and p2 >= 3, got p1={p1}, p2={p2}")]
    PeriodTooSmall { p1: usize, p2: usize },

    #[error("ShapeMismatch: array {array} has shape {rows}x{cols}, expected {p1}x{p2}")]
    ShapeMismatch {
        array: &'static str,
        rows: usize,
        cols: usize,
        p1: usize,
        p2: usize,
    },

    #[error("NonRealDiagonal: b1[{n}][{m}] has nonzero imaginary part {im}")]
    NonRealDiagonal { n: usize, m: usize, im: f64 },

    #[error("NonFinite: {context} entry at ({row}, {col}) is not finite")]
    NonFinite {
        context: &'static str,
        row: usize,
        col: usize,
    },

    #[error("IndexOutOfRange: ({alpha}, {beta}) outside [1,{p1}] x [1,{p2}]")]
    IndexOutOfRange {
        alpha: usize,
        beta: usize,
        p1: usize,
        p2: usize,
    },

    #[error("NotHermitian: asymmetry {defect:e} exceeds tolerance {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("NoConvergence: tridiagonal eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("NotDiagonalHopping: a0[{n}][{m}] = {re}{im:+}i is nonzero")]
    NotDiagonalHopping { n: usize, m: usize, re: f64, im: f64 },

    #[error("DimensionMismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("DimensionCap: torus dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("InvalidGrid: grid sizes must be positive, got {nx}x{ny}")]
    InvalidGrid { nx: usize, ny: usize },

    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors raised while validating raw coefficient input
    /// (as opposed to precondition or I/O failures).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::PeriodTooSmall { .. }
                | Error::ShapeMismatch { .. }
                | Error::NonRealDiagonal { .. }
                | Error::NonFinite { .. }
        )
    }
}
