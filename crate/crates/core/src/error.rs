use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("evaluation at a pole: x = {0}")]
    Pole(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested order {requested} exceeds the available expansion order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("theta blew up at x = {x:.6} (|theta| = {value:.3e}); energy is far outside the ground-state fine structure")]
    ThetaBlowUp { x: f64, value: f64 },

    #[error("energy outside the ground-state window: {0}")]
    OutsideWindow(String),

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("non-convergent tail: {0}")]
    TailDivergence(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("negative potential: {0}")]
    NegativePotential(String),
}

pub type Result<T> = std::result::Result<T, Error>;
