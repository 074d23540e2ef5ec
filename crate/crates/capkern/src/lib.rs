//! Exact-arithmetic computation of capitulation kernels for Galois coverings
//! of rings of Σ-integers, together with machine verification of the
//! five-term exact sequence relating the kernel to unit groups and the
//! cohomology of roots of unity.
//!
//! Everything downstream of fixture validation is certified by exact integer
//! or rational arithmetic; floating point never enters a final answer.

pub mod capitulation;
pub mod classunits;
pub mod cohom;
pub mod fgab;
pub mod fixture;
pub mod interval;
pub mod matrix;
pub mod nfield;
pub mod poly;
pub mod report;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("big-integer scale limit exceeded: {0}")]
    InternalOverflow(String),
    #[error("homomorphism is not well defined: {0}")]
    IllFormedHom(String),
    #[error("sequence maps are not composable: {0}")]
    NotComposable(String),
    #[error("cochain degree out of supported range: {0}")]
    DegreeOutOfRange(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("ideal is not a stored prime: {0}")]
    NotPrime(String),
    #[error("prime divides the order index: {0}")]
    IndexDivisor(String),
    #[error("ideal does not factor over the stored factor base: {0}")]
    NotSmooth(String),
    #[error("witness identity failed: {0}")]
    WitnessMismatch(String),
    #[error("factor base does not cover the Minkowski bound: {0}")]
    CoverageGap(String),
    #[error("saturation sweep found a principal ideal outside the relation lattice: {0}")]
    SaturationViolation(String),
    #[error("integer solve failed where a solution was certified to exist: {0}")]
    SolveFailure(String),
    #[error("element is not a Σ-unit: {0}")]
    NotAUnit(String),
    #[error("unit exponent recovery hit the precision ceiling: {0}")]
    RecoveryFailure(String),
    #[error("element is not an n-th power: {0}")]
    NotAnNthPower(String),
    #[error("resolvent vanished for all retries: {0}")]
    ResolventDegenerate(String),
    #[error("exact sequence verification failed at {node}: {detail}")]
    ExactnessFailure { node: String, detail: String },
    #[error("fixture parse error at line {line}: {detail}")]
    ParseError { line: usize, detail: String },
    #[error("fixture validation failed: {0}")]
    ValidationError(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code classification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ExactnessFailure { .. } => 2,
            Error::InternalOverflow(_) | Error::RecoveryFailure(_) => 3,
            _ => 1,
        }
    }
}
