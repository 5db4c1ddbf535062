use thiserror::Error;

use crate::ratlp::FarkasCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid preference: {0}")]
    InvalidPreference(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("{what}: n = {n} exceeds the enumeration guard {guard} (raise UA_GUARD_N to override)")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        guard: usize,
    },

    #[error("agent {agent} is outside the deadline subdomain: {pref}")]
    OutsideSubdomain { agent: usize, pref: String },

    #[error("malformed linear system: {0}")]
    MalformedSystem(String),

    #[error("linear system is infeasible")]
    Infeasible(FarkasCertificate),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("malformed flow network: {0}")]
    MalformedNetwork(String),

    #[error("certification failed [{tag}]: {detail}")]
    CertificationFailed { tag: String, detail: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
