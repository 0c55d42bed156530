use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {0} polynomial has no nodes")]
    NoNodes(usize),

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("{what}: value {value} outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("infinite weight at x = {x} (support endpoint of subinterval {s})")]
    InfiniteWeight { s: usize, x: f64 },

    #[error("generating function denominator vanishes at t = {t}, x = {x}")]
    SingularDenominator { t: f64, x: f64 },

    #[error("invalid quadrature request: {0}")]
    Quadrature(String),

    #[error("integrand is not finite at node {node}")]
    NonFiniteIntegrand { node: f64 },

    #[error("unsupported derivative order {0}")]
    UnsupportedOrder(usize),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("evaluation failed at x = {x}: {msg}")]
    Evaluation { x: f64, msg: String },

    #[error("invalid problem field `{field}`: {msg}")]
    Problem { field: &'static str, msg: String },

    #[error("unknown builtin problem {0} (expected 1..=5)")]
    UnknownBuiltin(usize),

    #[error("residual requested at the singular point x = 0 with mu = {mu}")]
    SingularPoint { mu: f64 },

    #[error("invalid scheme configuration: {0}")]
    Config(String),

    #[error("singular Jacobian (pivot magnitude {pivot:e})")]
    SingularJacobian { pivot: f64 },

    #[error("residual not finite after perturbing column {column}")]
    NonFiniteJacobian { column: usize },

    #[error("non-finite residual: {0}")]
    NonFiniteResidual(String),

    #[error("problem has no exact solution")]
    MissingExact,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
