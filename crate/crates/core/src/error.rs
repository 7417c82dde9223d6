use thiserror::Error;

use crate::linalg::SubsystemId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown subsystem {0}")]
    UnknownSubsystem(SubsystemId),

    #[error("subsystem {0} appears on both sides of a tensor product")]
    SubsystemCollision(SubsystemId),

    #[error("state vector is zero")]
    ZeroVector,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix has eigenvalue {0:e} below the positivity tolerance")]
    NotPositive(f64),

    #[error("truncation tail {deficit:e} exceeds tolerance {tol:e} at n_max = {n_max}")]
    TruncationUnreachable { n_max: usize, deficit: f64, tol: f64 },

    #[error("series did not converge: {0}")]
    SeriesDivergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
