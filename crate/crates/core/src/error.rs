use thiserror::Error;

use crate::geometry::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("total internal reflection at interface {interface} (sin = {sin:.6})")]
    TotalInternalReflection { interface: usize, sin: f64 },

    #[error("ray did not reach the stopping set within {0} segments")]
    SegmentBudget(usize),

    #[error("no stationary ray found from {from} to {to}; use the grid oracle")]
    UseOracle { from: Point, to: Point },

    #[error("level {level}: geodesic is not a graph over x ({detail})")]
    NonGraph { level: f64, detail: String },

    #[error("nesting violated between levels {lower} and {upper} (overlap {overlap:.3e})")]
    NestingViolation { lower: f64, upper: f64, overlap: f64 },

    #[error("point {0} lies outside the grid mask")]
    OutsideMask(Point),

    #[error("endpoints are not connected in the grid graph")]
    Disconnected,

    #[error("no grid samples in the ball of radius {0}")]
    EmptyBall(f64),

    #[error("no root in the bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::TotalInternalReflection { .. }
                | Error::SegmentBudget(_)
                | Error::UseOracle { .. }
                | Error::NonGraph { .. }
                | Error::NestingViolation { .. }
                | Error::Disconnected
                | Error::NoRoot { .. }
        )
    }
}
