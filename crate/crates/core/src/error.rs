use thiserror::Error;

use crate::partition::Violation;
use crate::ptype::PartitionType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(Violation),

    #[error("self-overlapping block: head {head}, length {len} with difference {m} in Z_{n}")]
    SelfOverlappingBlock {
        head: usize,
        len: usize,
        n: usize,
        m: usize,
    },

    #[error("unsupported type {0}: need at least one singleton and one non-singleton block")]
    UnsupportedType(PartitionType),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("type {ptype} has weight {weight}, expected {n}")]
    WeightMismatch {
        ptype: PartitionType,
        weight: usize,
        n: usize,
    },

    #[error("division {numerator} / {denominator} is not exact")]
    NonIntegral {
        numerator: String,
        denominator: String,
    },

    #[error("condition violated: ceil({k1}/{nonsingletons}) < ({max_difference}-1)*({max_size}-1) for type {ptype}")]
    ConditionViolated {
        ptype: PartitionType,
        k1: usize,
        nonsingletons: usize,
        max_difference: usize,
        max_size: usize,
    },

    #[error("{start} is not a starting point (maximal g-values are attained at {maximal:?})")]
    InvalidStart { start: usize, maximal: Vec<usize> },

    #[error("spacing violated: heads {a} and {b} differ by a forbidden multiple of {m}")]
    SpacingViolated { a: usize, b: usize, m: usize },

    #[error("enumeration budget exceeded ({max_nodes} search nodes)")]
    BudgetExceeded { max_nodes: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("blocks are not in increasing head order; pass the normalize option to reorder them")]
    NonCanonicalOrder,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A result the theory guarantees did not hold. Carries a state dump.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}
