use thiserror::Error;

/// Errors raised by the numerical kernels and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function pole at argument {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("vanishing Pochhammer denominator (c)_{k} with c = {c}")]
    InvalidDenominator { c: f64, k: usize },

    #[error("division by zero in complex arithmetic")]
    DivisionByZero,

    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("R(z) = {value} is not positive at z = {z}")]
    SingularQuadratic { z: f64, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("coordinate map integration failed: {0}")]
    Integration(String),

    #[error("value {value} out of tabulated range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("negative radicand for {which}: {value}")]
    NegativeRadicand { which: &'static str, value: f64 },

    #[error("ambiguous branch: level {nu} has {roots} roots of the quantization condition")]
    BranchAmbiguity { nu: usize, roots: usize },

    #[error("root not bracketed on [{a}, {b}]")]
    NotBracketed { a: f64, b: f64 },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("function is not normalizable on the grid: {0}")]
    NonNormalizable(String),

    #[error("function does not vanish at the grid edge (|f| = {edge} vs max {max})")]
    GridEdge { edge: f64, max: f64 },

    #[error("lowering operator annihilates the lowest-weight state (nu = 0)")]
    LowestWeight,

    #[error("recursion breakdown: so(2,1) matrix element vanishes at m = {m}")]
    RecursionBreakdown { m: f64 },

    #[error("wavefunction has a node inside the fit window near r = {r}")]
    NodeInWindow { r: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
