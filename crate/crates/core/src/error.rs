use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    #[error("quadrature field has {nodes} nodes, limit is {limit}")]
    TooManyNodes { nodes: usize, limit: usize },

    #[error("mask selects no nodes")]
    EmptyMask,

    #[error("mask is not 4-connected ({components} components)")]
    DisconnectedMask { components: usize },

    #[error("lattice {lattice} does not match the agreement set of a {kind} pair")]
    LatticeMismatch { lattice: String, kind: String },

    #[error("numerical overflow in {0}")]
    Overflow(&'static str),

    #[error("eigensolver did not converge after {iterations} iterations; residuals {residuals:?}")]
    NoConvergence { iterations: usize, residuals: Vec<f64> },

    #[error("degenerate spectrum: lambda_1 = {0}")]
    DegenerateSpectrum(f64),

    #[error("field is constant on the domain")]
    ConstantField,

    #[error("cut {0} is not admissible")]
    InadmissibleCut(String),

    #[error("no admissible cut in family")]
    NoAdmissibleCut,

    #[error("point ({x}, {w}) is too close to a zero (|Bf| = {modulus:e})")]
    NearZero { x: f64, w: f64, modulus: f64 },

    #[error("matrix is not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn require(cond: bool, name: &'static str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(name, reason))
    }
}
