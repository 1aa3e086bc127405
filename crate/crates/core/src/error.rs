use thiserror::Error;

pub type Result<T, E = FormError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("dimension {n} is outside the supported range 0..={max}")]
    DimensionOutOfRange { n: usize, max: usize },

    #[error("degree ({p},{q}) is out of range for dimension {n}")]
    DegreeOutOfRange { n: usize, p: usize, q: usize },

    #[error("invalid index set {indices:?} for dimension {n}: {reason}")]
    InvalidIndexSet {
        n: usize,
        indices: Vec<usize>,
        reason: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("bidegree mismatch: ({0},{1}) vs ({2},{3})")]
    BidegreeMismatch(usize, usize, usize, usize),

    #[error("operation requires a square bidegree, got ({p},{q})")]
    NotSquare { p: usize, q: usize },

    #[error("form is not symmetric")]
    NotSymmetric,

    #[error("form does not satisfy the first Bianchi identity")]
    BianchiViolated,

    #[error("D^({p},{q}) at n={n} needs {cells} cells, above the budget of {budget}")]
    CellBudgetExceeded {
        n: usize,
        p: usize,
        q: usize,
        cells: usize,
        budget: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vectors of a frame must be linearly independent")]
    DegenerateFrame,

    #[error("{0}")]
    Range(String),

    #[error("linear system has no solution")]
    Inconsistent,
}
