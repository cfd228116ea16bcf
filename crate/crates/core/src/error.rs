use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a probability space needs at least one outcome")]
    Empty,
    #[error("weight {weight} of outcome {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("weight {weight} of outcome {index} is not finite")]
    NonFiniteWeight { index: usize, weight: f64 },
    #[error("weights sum to {sum}, which is not within 1e-9 of 1")]
    NotNormalized { sum: f64 },
    #[error("outcome index {index} is out of range for a space of {n} outcomes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operands belong to spaces of {left} and {right} outcomes")]
    SpaceMismatch { left: usize, right: usize },
    #[error("conditioning event has probability zero")]
    ZeroConditioningEvent,
    #[error("partition has no blocks")]
    EmptyPartition,
    #[error("outcome {outcome} lies in more than one block")]
    NotDisjoint { outcome: usize },
    #[error("outcome {outcome} is not covered by any block")]
    NotCovering { outcome: usize },
    #[error("block {block} has probability zero")]
    ZeroMassBlock { block: usize },
    #[error("variable is not constant on block {block}")]
    NotMeasurable { block: usize },
    #[error("value {value} at outcome {index} is not finite")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("epsilon {0} is outside (0, 2]")]
    BadEpsilon(f64),
    #[error("finite-difference step {0} must be positive")]
    BadStep(f64),
    #[error("bad solver configuration: {0}")]
    BadConfig(String),
}
