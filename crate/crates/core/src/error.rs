use thiserror::Error;

use crate::kernel::ContextId;

/// Failure raised by a context logic while computing acceptable belief sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("{logic} logic rejects element {element}")]
    RejectedElement { logic: String, element: String },
    #[error("unsupported rule for {logic} logic: {reason}")]
    Unsupported { logic: String, reason: String },
    #[error("{logic} logic cannot enumerate its belief sets")]
    NotEnumerable { logic: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context {context}: {source}")]
    Logic {
        context: ContextId,
        #[source]
        source: LogicError,
    },
    #[error("{free_heads} undetermined bridge-rule heads; an explicit enumeration limit is required above {threshold}")]
    LimitRequired { free_heads: usize, threshold: usize },
    #[error("unsafe constraint: variable {variable} occurs only under negation and more than once")]
    UnsafeConstraint { variable: String },
    #[error("invalid update action: {0}")]
    Action(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
