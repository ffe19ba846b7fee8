use thiserror::Error;

use crate::model::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed instance text. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("node {to} is unreachable from node {from}")]
    Unreachable { from: NodeId, to: NodeId },

    /// No pair of edge-disjoint paths exists; `cut` is a bridge separating the endpoints.
    #[error("no two edge-disjoint paths from {from} to {to}: edge {}-{} is a bridge", cut.0, cut.1)]
    Survivability {
        from: NodeId,
        to: NodeId,
        cut: (NodeId, NodeId),
    },

    /// A routing or coding assignment is inconsistent with the instance it is evaluated on.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Argument outside the domain of a closed-form expression or search routine.
    #[error("{0}")]
    Domain(String),

    #[error("oracle guard exceeded: {0}")]
    OracleGuard(String),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Parse { .. } | Error::Instance(_) | Error::Contract(_) | Error::Domain(_) => 3,
            Error::Unreachable { .. } | Error::Survivability { .. } => 4,
            Error::OracleGuard(_) => 5,
        }
    }
}
