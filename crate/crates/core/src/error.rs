use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("segment {index}: width must be positive and finite")]
    InvalidWidth { index: usize },
    #[error("segment {index}: potential value must be finite")]
    InvalidValue { index: usize },
    #[error("origin must be finite")]
    InvalidOrigin,
    #[error("invalid domain: need a < b (got [{a}, {b}])")]
    InvalidDomain { a: f64, b: f64 },
    #[error("energy must be positive for propagating leads (got {0})")]
    NonPositiveEnergy(f64),
    #[error("ode oracle needs at least 1000 steps (got {0})")]
    TooFewSteps(usize),
    #[error("at least two samples are required (got {0})")]
    TooFewSamples(usize),
    #[error("zero-current state: the map is singular (|J| = {0:e})")]
    ZeroCurrent(f64),
    #[error("band edge: |cos(k_B L)| = 1 within tolerance (half trace {0})")]
    BandEdge(f64),
    #[error("potential is not reflection symmetric about its center")]
    NotSymmetric,
    #[error("phase of a vanishing matrix element is undefined")]
    UndefinedPhase,
    #[error("field node at decomposition boundary {index} (x = {x})")]
    BoundaryNode { index: usize, x: f64 },
    #[error("reflection amplitude r = -1: closed form is singular")]
    SingularClosedForm,
    #[error("invariant sets come from different solutions (energies {0} and {1})")]
    MixedSolutions(f64, f64),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid energy grid: {0}")]
    InvalidGrid(&'static str),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
