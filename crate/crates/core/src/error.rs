use thiserror::Error;

use crate::mms::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("invalid space: {0}")]
    Validation(ValidationReport),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("infeasible marginals: source mass {source_mass}, target mass {target_mass}")]
    InfeasibleMarginals { source_mass: f64, target_mass: f64 },

    #[error("empty support")]
    EmptySupport,

    #[error("base diameter exceeds pi: d({i},{j}) = {distance}")]
    DiameterTooLarge { i: usize, j: usize, distance: f64 },

    #[error("no intermediate point for pair ({i},{j}) within tolerance: best slack {slack:.3e} > {tol:.3e}")]
    PlanTooCoarse {
        i: usize,
        j: usize,
        slack: f64,
        tol: f64,
    },

    #[error("graph is disconnected: {} components", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("singular measure: {mass:.3e} mass on zero-weight points")]
    SingularMeasure { mass: f64 },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("transport solver did not converge: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
