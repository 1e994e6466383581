use thiserror::Error;

use crate::graph::TreeVertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("invalid edge {0}-{1}")]
    InvalidEdge(usize, usize),
    #[error("invalid tree vertex {0}")]
    InvalidTreeVertex(TreeVertex),
    #[error("invalid tree presentation: {0}")]
    InvalidTree(String),
    #[error("invalid end descriptor: {0}")]
    InvalidEnd(String),
    #[error("graph is not acyclic")]
    NotAcyclic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget of {budget} exceeded while {context}")]
    BudgetExceeded {
        context: String,
        budget: usize,
        /// Vertices still growing when the budget ran out.
        frontier: Vec<TreeVertex>,
    },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn budget(context: impl Into<String>, budget: usize) -> Self {
        Error::BudgetExceeded {
            context: context.into(),
            budget,
            frontier: Vec::new(),
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
