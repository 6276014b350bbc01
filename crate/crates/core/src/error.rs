use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),
    #[error("invalid curve parameters: {0}")]
    InvalidCurveParams(String),
    #[error("voxel grid does not cover the torus: {0}")]
    Coverage(String),
    #[error("curve point {index} leaves the torus solid (boundary distance {distance:.3e})")]
    Deformation { index: usize, distance: f64 },
    #[error("curves {first} and {second} are {distance:.4} apart, below the required {required:.4}")]
    Separation {
        first: usize,
        second: usize,
        distance: f64,
        required: f64,
    },
    #[error("empty curve set")]
    EmptyCurveSet,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("split failed: {0}")]
    Split(String),
    #[error("edge element composition failed: {0}")]
    Composition(String),
    #[error("planning failed at vertex {vertex}: {reason}")]
    Planning { vertex: usize, reason: String },
    #[error("plan invalid: {0}")]
    PlanViolation(PlanViolations),
    #[error("cannot mesh an empty voxel set")]
    EmptyMesh,
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Every invariant violation found by the plan checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanViolations(pub Vec<String>);

impl fmt::Display for PlanViolations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("; "))
    }
}
