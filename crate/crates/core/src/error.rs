use thiserror::Error;

use crate::poset::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation ({u}, {v}) closes a cycle")]
    Cycle { u: ElementId, v: ElementId },

    #[error("element id {id} out of range for ground set of size {n}")]
    Range { id: usize, n: usize },

    #[error("element {element} appears in both set {first} and set {second}")]
    Overlap {
        element: ElementId,
        first: usize,
        second: usize,
    },

    #[error("operation requires a nonempty poset")]
    Empty,

    /// Every violated inequality, by name.
    #[error("precondition violated: {}", .0.join("; "))]
    Precondition(Vec<String>),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("instance too small{}: {detail}", level.map(|l| format!(" at level {l}")).unwrap_or_default())]
    InstanceTooSmall {
        level: Option<usize>,
        detail: String,
    },

    #[error("order {index} has {found} elements, expected {expected}")]
    GroundMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("not a partition: {0}")]
    Partition(String),

    #[error("instance of size {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("argument out of range: {0}")]
    Argument(String),

    #[error("invalid generator spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
