use thiserror::Error;

/// Errors raised by the library. Failed verifications are reported through
/// report values; these variants cover contract violations and resource caps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("truncation point {z} is not congruent to residue {r} modulo {k}")]
    ResidueMismatch { k: u32, r: i64, z: i64 },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("time limit of {0:?} exceeded")]
    Timeout(std::time::Duration),

    #[error("psi is only defined for edges inside the window; got edge with upper level {upper_level}, window ({lo}..={hi})")]
    EdgeOutsideWindow { upper_level: u32, lo: u32, hi: u32 },

    #[error("certificate invariant violated: {0}")]
    Certificate(String),

    #[error("profile rejected: {0}")]
    ProfileRejected(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
