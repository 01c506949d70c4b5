use thiserror::Error;

pub type Result<T> = std::result::Result<T, BowtieError>;

#[derive(Debug, Error)]
pub enum BowtieError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("point lies on a singular set: {0}")]
    SingularPoint(String),
    #[error("point lies inside an inclusion: ({x}, {y})")]
    InsideInclusion { x: f64, y: f64 },
    #[error("emitter too close to the boundary: distance {distance:.3e} < required {required:.3e}")]
    EmitterTooClose { distance: f64, required: f64 },
    #[error("problem kind does not match the geometry: {0}")]
    ProblemMismatch(String),
    #[error("linear system is ill-conditioned: estimated condition number {0:.3e}")]
    IllConditioned(f64),
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for BowtieError {
    fn from(e: serde_json::Error) -> Self {
        BowtieError::Parse(e.to_string())
    }
}

impl From<toml::de::Error> for BowtieError {
    fn from(e: toml::de::Error) -> Self {
        BowtieError::Parse(e.to_string())
    }
}
