use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {0} has no assigned value")]
    UnassignedVariable(u32),
    #[error("variable index {index} out of range for a chart with {dim} variables")]
    VariableOutOfRange { index: u32, dim: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("`{name}` has negative weight {weight} in N-graded component {component}")]
    NegativeWeight {
        name: String,
        weight: i64,
        component: usize,
    },
    #[error("chart declaration mismatch: {0}")]
    BadChart(String),
    #[error("grading component {component} out of range (chart has {count})")]
    NoSuchComponent { component: usize, count: usize },
    #[error("shift k = {k} is below weight {weight} of `{name}`")]
    ShiftTooSmall { k: i64, weight: i64, name: String },
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("valence mismatch: expected {expected}, found ({q},{p})")]
    Valence {
        expected: String,
        q: usize,
        p: usize,
    },
    #[error("tensor is not antisymmetric in its {0} slots")]
    NotAntisymmetric(&'static str),
    #[error("tensor is not symmetric in its {0} slots")]
    NotSymmetric(&'static str),
    #[error("slot {slot} out of range for order {order}")]
    SlotOutOfRange { slot: usize, order: usize },
    #[error("insertion of order {inserted} into {available} slots")]
    InsertionTooLarge { inserted: usize, available: usize },
    #[error("chart dimension {0} is not odd")]
    EvenDimension(usize),
    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
