use thiserror::Error;

use crate::minkowski::FourVector;

#[derive(Debug, Error)]
pub enum Error {
    #[error("direction must be a unit 3-vector (|d| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("propagation vector {k:?} is not lightlike (k.k = {norm})")]
    NotLightlike { k: FourVector, norm: f64 },

    #[error("amplitude is not transverse to the propagation vector: k.A_c = {residual} (k^mu A_mu = 0 is required)")]
    NotTransverse { residual: f64 },

    #[error("field singularity: spatial distance {distance} to source is below {limit}")]
    Singularity { distance: f64, limit: f64 },

    #[error("{0} requires a plane-wave potential")]
    NotPlaneWave(&'static str),

    #[error("field has no propagation vector; {0}")]
    NoPropagationVector(&'static str),

    #[error("superposition needs at least one field")]
    EmptySuperposition,

    #[error("trajectory too short: covers {available} time units, need {required}")]
    TrajectoryTooShort { available: f64, required: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
