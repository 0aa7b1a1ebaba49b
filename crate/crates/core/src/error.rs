use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),

    #[error("digraph is empty")]
    EmptyDigraph,

    #[error("vertex sets overlap at {0}")]
    OverlappingSets(usize),

    #[error("digraph is not semicomplete: no arc between {0} and {1}")]
    NotSemicomplete(usize, usize),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("endpoints must differ (got {0} twice)")]
    EqualEndpoints(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("only {found} of {requested} disjoint paths exist")]
    Infeasible {
        requested: usize,
        found: usize,
        cut: crate::flow::CutCertificate,
    },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
