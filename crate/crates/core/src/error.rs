use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Wright series did not converge within {terms} terms (z = {z}, gamma = {gamma}, delta = {delta})")]
    WrightNonConvergence {
        z: f64,
        gamma: f64,
        delta: f64,
        terms: usize,
    },

    #[error("no sign change on bracket [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("iteration budget of {0} exhausted before convergence")]
    NonConvergence(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("zero pivot in tridiagonal elimination at row {0}")]
    ZeroPivot(usize),

    #[error("time layers up to {needed} must be populated, only {populated} are")]
    UnpopulatedHistory { needed: usize, populated: usize },

    #[error("physical parameters required but not provided")]
    MissingPhysical,

    #[error("front estimator degenerate: every concentration jump at the front is non-positive")]
    DegenerateGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
