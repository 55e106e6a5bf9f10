use thiserror::Error;

/// Everything that can go wrong when building or analysing a transformation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "matrix is not a proper rotation (orthogonality residual {orthogonality:.3e}, det {det})"
    )]
    InvalidRotation { orthogonality: f64, det: f64 },

    #[error("degenerate map: {0}")]
    DegenerateMap(&'static str),

    #[error("map is not at rest: |velocity| = {speed:.3e}")]
    NotAtRest { speed: f64 },

    #[error("worldline image cannot be parametrized by time")]
    DegenerateWorldline,

    #[error("velocity {v} lies outside the domain interval ]{lower}, {upper}[")]
    Domain { v: f64, lower: f64, upper: f64 },

    #[error("reflected velocity {v} lies outside the asymmetric domain ]{lower}, {upper}[")]
    AsymmetricDomain { v: f64, lower: f64, upper: f64 },

    #[error("direction vector is not a unit vector (|u| = {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("speed {speed} is not below the limit speed {limit}")]
    Superluminal { speed: f64, limit: f64 },

    #[error("synchrony vector violates |k| < 1/c (|k| = {norm}, 1/c = {bound})")]
    InvalidSynchrony { norm: f64, bound: f64 },

    #[error("map is not a member of the claimed group (residual {residual:.3e})")]
    NotInGroup { residual: f64 },

    #[error("rapidity scale must be nonzero")]
    ZeroScale,

    #[error("position vector must be nonzero")]
    ZeroPosition,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("light cannot propagate along the requested direction in the image chart")]
    NoLightRay,

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
