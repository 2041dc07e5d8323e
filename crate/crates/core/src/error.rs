use thiserror::Error;

use crate::density::cube::CubeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point ({x}, {y}, {z}) lies outside the grid hull")]
    OutOfHull { x: f64, y: f64, z: f64 },

    #[error(transparent)]
    Cube(#[from] CubeError),

    #[error("alignment undefined for j=0")]
    AlignmentUndefined,

    #[error("zero total desorption weight for j={j}, E_tot={etot} eV")]
    ZeroWeight { j: u32, etot: f64 },

    #[error("theta {0} deg is not present in the curve")]
    ThetaNotInCurve(f64),

    #[error("HLR yield vanishes")]
    VanishingHlrYield,

    #[error("partition sum not converged at j_max={j_max} for T={temperature} K; raise j_max")]
    NotConverged { j_max: u32, temperature: f64 },

    #[error("target boil-off {target} unreachable (maximum {max})")]
    Unreachable { target: f64, max: f64 },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("empty selection")]
    EmptySelection,

    #[error("table error at line {line}: {msg}")]
    Table { line: u64, msg: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
