//! Exact equivariant Todd coefficients of complete toric fans and local
//! Euler-Maclaurin summation over lattice polytopes.
//!
//! Everything is computed in exact rational arithmetic. The crate is organised
//! bottom-up:
//!
//! - [`ratlin`] - rational linear algebra over the standard lattice: Hermite
//!   and Smith normal forms, sublattice bases, metric spaces and orthogonal
//!   quotient models.
//! - [`series`] - truncated multivariate power series with explicit trusted
//!   order, linear forms, and pole-cleared meromorphic forms
//!   `scale * numerator / prod(linear forms)`.
//! - [`cones`] - rational polyhedral cones, face lattices, duals, transverse
//!   cones, pulling triangulations, half-open decompositions, box points and
//!   fans.
//! - [`polytope`] - lattice polytopes with full face enumeration at desk
//!   scale (dimension <= 4).
//! - [`mu`] - the Euler-Maclaurin germ `mu` of a pointed cone, defined by the
//!   recursion `S(c) = sum over faces f of mu(transverse cone) * I(f)`, and
//!   its metric-dependent extension `todd_measure` to cones of a fan.
//! - [`todd`] - equivariant Todd coefficient families of complete fans and
//!   the consistency checks they satisfy (simplicial restriction, valuation,
//!   localization, fan independence).
//! - [`polyeml`] - exact weighted lattice-point sums over lattice polytopes
//!   via face-by-face differential operators, plus the classical
//!   one-dimensional Euler-Maclaurin formula.
//! - [`doc`] - versioned JSON documents for cones, fans, polytopes,
//!   polynomials, series, Todd expansions and verification reports.
//! - [`corpus`] - built-in cones, fans and polytopes plus seeded random
//!   instance generators used by the verification suites.
//! - [`verify`] - the named verification suites exposed by the CLI.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `src/bin/conetodd.rs` is a thin command-line front end.

pub mod ratlin;
pub mod series;
pub mod cones;
pub mod polytope;
pub mod mu;
pub mod todd;
pub mod polyeml;
pub mod doc;
pub mod corpus;
pub mod verify;

/// Crate-wide error type.
///
/// The CLI maps these to exit codes: malformed inputs exit 2, verification
/// failures exit 3, and internal invariant breaches (a division that number
/// theory says must be exact failing, or an order budget violation) exit 4.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("matrix is singular")]
    Singular,
    #[error("metric is not a symmetric positive definite rational matrix: {0}")]
    InvalidMetric(String),
    #[error("linearly dependent vectors: {0}")]
    DependentVectors(String),
    #[error("series shape mismatch: {0}")]
    SeriesShape(String),
    #[error("series is not divisible by the linear form: first offending total degree {degree}")]
    NotDivisible { degree: u32 },
    #[error("insufficient trusted order: need {required}, have {available}")]
    InsufficientOrder { required: u32, available: u32 },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not full-dimensional in its space")]
    NotFullDim,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("dimension {0} exceeds the supported desk scale for face enumeration")]
    DimTooLarge(usize),
    #[error("witness point lies outside the union of the pieces")]
    WitnessOutside,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("document error: {0}")]
    Document(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// True for errors that can only arise from a bug in this crate's own
    /// arithmetic (theory guarantees the operation succeeds on valid input).
    pub fn is_internal_invariant(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible { .. } | Error::InsufficientOrder { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
