use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: {source}")]
    At {
        line: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("non-composable path `{0}`")]
    NonComposable(String),

    #[error("non-parallel relation `{0}`")]
    NonParallel(String),

    #[error("invalid relation `{rel}`: {reason}")]
    InvalidRelation { rel: String, reason: String },

    #[error("not finite: a path of length {cap} is nonzero under closure")]
    NotFinite { cap: usize },

    #[error("closure exceeded {nodes} nodes without reaching a fixpoint")]
    ClosureBudget { nodes: usize },

    #[error("zero morphism not allowed here")]
    ZeroMorphism,

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("axiom {axiom} violated: {detail}")]
    AxiomViolation { axiom: char, detail: String },

    #[error("non-functorial diagram: {0}")]
    NotFunctorial(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),
}

impl Error {
    pub(crate) fn at(self, line: usize, col: usize) -> Self {
        match self {
            e @ (Error::Syntax { .. } | Error::At { .. }) => e,
            e => Error::At {
                line,
                col,
                source: Box::new(e),
            },
        }
    }

    /// The underlying error with any position wrapper removed.
    pub fn kind(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.kind(),
            e => e,
        }
    }
}
