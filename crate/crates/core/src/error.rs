use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree sequence: in-degree sum {in_sum} != out-degree sum {out_sum}")]
    InvalidSequence { in_sum: usize, out_sum: usize },

    #[error("degree sequence is empty")]
    EmptySequence,

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("could not balance degree sums after {redraws} redraws")]
    RepairFailed { redraws: usize },

    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),

    #[error("unbalanced degree distribution: mean in-degree {mu10} != mean out-degree {mu01}")]
    Imbalance { mu10: f64, mu01: f64 },

    #[error("no simple graph after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error("mean degree is zero")]
    ZeroMeanDegree,

    #[error("mu11 is zero; percolation threshold undefined")]
    ZeroMu11,

    #[error("percolation probability {0} outside (0, 1]")]
    PiOutOfRange(f64),

    #[error("argument {name} = {value} outside [0, 1]")]
    ArgumentOutOfRange { name: &'static str, value: f64 },

    #[error("graph degrees do not match the degree sequence")]
    DegreeMismatch,

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error(
        "fixed-point iteration did not converge in {iters} iterations (best {best}, residual {residual:e})"
    )]
    MaxItersExceeded { best: f64, iters: usize, residual: f64 },

    #[error("no trial records to summarize")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
