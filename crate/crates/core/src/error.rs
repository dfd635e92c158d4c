use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("{which} marginal is not a probability vector (total mass {total})")]
    InfeasibleMarginals { which: &'static str, total: String },

    #[error("cell has zero mass")]
    ZeroMassCell,

    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("instance has {cells} cells, enumeration cap is {cap}")]
    InstanceTooLarge { cells: usize, cap: usize },

    #[error("anchor set is empty")]
    EmptyAnchorSet,

    #[error("metric required but the space has none")]
    MissingMetric,

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cell {cell} has no representative")]
    MissingRepresentative { cell: usize },

    #[error("uniform Lipschitz bound violated between points {x} and {z}: sup_y |c(x,y)-c(z,y)| = {gap} > {bound}")]
    LipschitzBoundViolated { x: usize, z: usize, gap: String, bound: String },

    #[error("potential pair is infeasible at ({x}, {y}): f+g = {sum}, c = {cost}")]
    InfeasibleWitness { x: usize, y: usize, sum: String, cost: String },

    #[error("approximant stages are not nondecreasing: stage {stage} exceeds its successor at ({x}, {y})")]
    NotMonotone { stage: usize, x: usize, y: usize },

    #[error("marginal mismatch: {0}")]
    MarginalMismatch(String),

    #[error("map is not measure preserving; defect nu - mu∘map^-1 = [{}]", .defect.join(", "))]
    NotMeasurePreserving { defect: Vec<String> },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear program is unbounded")]
    Unbounded,
}
