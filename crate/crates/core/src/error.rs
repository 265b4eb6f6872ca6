//! Error types shared across the crate.

use thiserror::Error;

/// Errors reported by the algebra and linear-algebra layers.
///
/// Contract violations (mismatched degrees, variable counts or vector
/// dimensions) are reported as errors on the public entry points so that
/// callers such as the CLI can surface them cleanly. Resource errors carry
/// enough context to decide whether a retry with a larger budget makes sense.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u64, right: u64 },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("dimension mismatch: vector of length {got}, space of dimension {want}")]
    DimensionMismatch { got: usize, want: usize },

    #[error(
        "memory ceiling exceeded: the {frame}-monomial frame needs about {needed_gb:.2} GiB, \
         ceiling is {ceiling_gb:.2} GiB"
    )]
    MemoryCeiling {
        frame: usize,
        needed_gb: f64,
        ceiling_gb: f64,
    },

    #[error("wall-clock budget exceeded while echelonizing the {frame}-monomial frame")]
    DeadlineExceeded { frame: usize },

    #[error("degrees {domain} and {codomain} are not related by d = m + 2n for m = {m}")]
    HalvingParity {
        m: usize,
        domain: u64,
        codomain: u64,
    },

    #[error("substitution matrix is singular over F2")]
    SingularSubstitution,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("corrupt echelon artifact: {0}")]
    CorruptArtifact(String),
}

impl Error {
    /// True for failures caused by a resource budget rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::MemoryCeiling { .. } | Error::DeadlineExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
