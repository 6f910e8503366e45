use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage an error originated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    StationaryPoints,
    NonOscillatoryRegion,
    Exits,
    Tracing,
    Graph,
    Quadrature,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::StationaryPoints => "stationary points",
            Stage::NonOscillatoryRegion => "non-oscillatory region",
            Stage::Exits => "exits",
            Stage::Tracing => "contour tracing",
            Stage::Graph => "graph",
            Stage::Quadrature => "quadrature",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finding did not converge for a degree {degree} polynomial")]
    RootsNotConverged { degree: usize },

    #[error("no positive ball radius found around {center}")]
    BallRadius { center: Complex64 },

    #[error("no exits found on the ball centred at {center}")]
    NoExits { center: Complex64 },

    #[error("contour failed to terminate after {steps} steps")]
    TraceDidNotTerminate { steps: usize },

    #[error("contour from {origin} runs into a stationary point")]
    HitStationaryPoint { origin: Complex64 },

    #[error("Newton iteration did not converge at p = {p}")]
    NewtonDiverged { p: f64 },

    #[error("deformation not found: the endpoints are not connected")]
    DeformationNotFound,

    #[error("result is not representable in double precision (overflow or NaN)")]
    NonFinite,

    #[error("oracle out of budget")]
    OracleBudget,

    #[error("oracle: integrand does not decay along the ray at angle {angle}")]
    OracleNoDecay { angle: f64 },

    #[error("{stage}: {source}")]
    InStage { stage: Stage, source: Box<Error> },
}

impl Error {
    pub(crate) fn in_stage(self, stage: Stage) -> Self {
        match self {
            e @ (Error::InStage { .. } | Error::InvalidInput(_)) => e,
            e => Error::InStage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// True for errors caused by the request itself rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InvalidInput(_) => true,
            Error::InStage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
