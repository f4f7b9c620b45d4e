use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("not a valid graph: {0}")]
    InvalidGraph(String),

    #[error("length mismatch: expected {expected} {what}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("frequency at vertex {index} is not finite")]
    NonFiniteFrequency { index: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("vertex {0} is not a cut-vertex separating the given side")]
    NotACutVertex(usize),

    #[error("edge ({0}, {1}) is not a cut-edge")]
    NotACutEdge(usize, usize),

    #[error("component with {vertices} vertices and {edges} edges is 2-connected; no closed form")]
    Irreducible { vertices: usize, edges: usize },

    #[error("integration produced a non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid bisection bracket [{lo}, {hi}]: {reason}")]
    BracketInvalid { lo: f64, hi: f64, reason: String },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("{n} vertices is too many for exhaustive search (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for errors that describe structurally invalid input rather than
    /// malformed text or bad numeric parameters.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::NotATree(_)
                | Error::InvalidGraph(_)
                | Error::LengthMismatch { .. }
                | Error::NonFiniteFrequency { .. }
        )
    }
}
