use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no slope")]
    ZeroVector,
    #[error("fan is not regular between rays {0} and {1}")]
    NonRegularFan(String, String),
    #[error("empty support")]
    EmptySupport,
    #[error("vector {0} lies outside the first quadrant")]
    VectorOutsideQuadrant(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomials share a common factor")]
    CommonFactor,
    #[error("center at node {node} is not rational: {detail}")]
    NonRationalCenter { node: usize, detail: String },
    #[error("the branch x = 0 is a component of the curve")]
    RIsComponent,
    #[error("depth guard of {0} exceeded")]
    DepthExceeded(usize),
    #[error("could not lift a curvetta for {0}")]
    LiftFailed(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("face polynomials of the Newton polygon are degenerate")]
    DegenerateFaces,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
