//! Crate-wide error type.

use crate::model::ValidationReport;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario validation failed:\n{0}")]
    InvalidScenario(ValidationReport),

    #[error("evaluation point coincides with the charge position")]
    SingularPoint,

    #[error("charge speed {speed:.3e} m/s is not below the speed of light")]
    SuperluminalCharge { speed: f64 },

    #[error(
        "point lies inside or within the exclusion margin of the flux region \
         (clearance {clearance:.3e} m, margin {margin:.3e} m)"
    )]
    TooCloseToRegion { clearance: f64, margin: f64 },

    #[error("{operation} requires a {required} source")]
    WrongSourceKind {
        operation: &'static str,
        required: &'static str,
    },

    #[error("operation requires a bounded flux region (finite_solenoid or toroid)")]
    UnboundedRegion,

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (error estimate {error_estimate:.3e})"
    )]
    QuadratureDidNotConverge {
        subdivisions: u64,
        error_estimate: f64,
    },

    #[error("time interval is empty or reversed: t0 = {t0}, t1 = {t1}")]
    EmptyTimeInterval { t0: f64, t1: f64 },

    #[error("path is not closed: first and last vertices differ")]
    OpenPath,

    #[error("beam path needs at least 2 vertices")]
    PathTooShort,

    #[error("beam path enters or passes too close to the flux region")]
    PathTooCloseToRegion,

    #[error("two-path beams must share their first and last vertices")]
    PathsNotJoined,

    #[error("path vertex projects onto the source axis; winding is undefined")]
    VertexOnAxis,

    #[error("current distribution has no elements")]
    EmptyCurrentDistribution,

    #[error("flux sweep is empty")]
    EmptyFluxSweep,

    #[error("{operation} requires a {required} experiment")]
    WrongExperiment {
        operation: &'static str,
        required: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
