use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("point kind mismatch: {0}")]
    PointKind(String),

    #[error("metric axiom violated ({axiom}): {detail}")]
    MetricAxiom { axiom: &'static str, detail: String },

    #[error("incompatible point sets: {0}")]
    IncompatiblePointSets(String),

    #[error("map undefined on point {0}")]
    MapUndefined(String),

    #[error("weights must sum to 1 (got {0})")]
    WeightSum(f64),

    #[error("invalid weight {0}: weights must be finite and non-negative")]
    InvalidWeight(f64),

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("conditioning on a null set")]
    NullCondition,

    #[error("partition cells overlap at atom {0}")]
    PartitionOverlap(String),

    #[error("partition does not cover atom {0}")]
    PartitionCoverage(String),

    #[error("instance outside the supported oracle regime: {0}")]
    OracleRegime(String),

    #[error("Lipschitz bound violated between {x} and {y}: |f(x)-f(y)| = {gap} > {bound}")]
    Lipschitz {
        x: String,
        y: String,
        gap: f64,
        bound: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("transport solver did not terminate within {0} pivots")]
    SolverStalled(usize),

    #[error("invalid input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
