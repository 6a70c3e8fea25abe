use thiserror::Error;

use crate::graphs::Vertex;
use crate::formula::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid clause: {0}")]
    InvalidClause(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("formula is not monotone 3-SAT: {0}")]
    NotMonotone(String),

    #[error("formula violates structural property {0}")]
    PropertyViolated(u8),

    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(u64),

    #[error("replacement chain of variable {0} is not constant under the assignment")]
    ChainViolated(Var),

    #[error("assignment does not NAE-satisfy the formula")]
    NotSatisfying,

    #[error("cut is not triangle-free{}", .0.map(|t| format!(": monochromatic triangle {} {} {}", t[0], t[1], t[2])).unwrap_or_default())]
    NotTriangleFree(Option<[Vertex; 3]>),

    #[error("cut has an empty side")]
    EmptySide,

    #[error("improper colouring: {0}")]
    ImproperColouring(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
