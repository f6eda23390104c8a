use thiserror::Error;

/// Errors produced by the model, solvers, tree harness and classifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta must be positive and finite, got {0}")]
    InvalidTheta(f64),

    #[error("field component {index} is not finite ({value})")]
    NonFiniteField { index: usize, value: f64 },

    #[error("field has {got} components, expected {expected}")]
    FieldLength { expected: usize, got: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("boundary matrix ({a},{b};{c},{d}) must have both row sums equal to k = {k}")]
    MatrixRowSums {
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        k: usize,
    },

    #[error("critical temperature is undefined for tree order k = {0} (requires k >= 2)")]
    DegenerateOrder(usize),

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("function evaluated to a non-finite value at x = {0}")]
    NonFiniteEvaluation(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("|A| = {a_size} is outside 1..={k}")]
    SubsetSizeOutOfRange { a_size: usize, k: usize },

    #[error("tree of order {k} and depth {depth} exceeds the cap of {cap} vertices")]
    TreeTooLarge { k: usize, depth: usize, cap: usize },

    #[error("enumerating {q}^{vertices} configurations exceeds the budget of {budget}")]
    BudgetExceeded { q: usize, vertices: usize, budget: u64 },

    #[error("configuration has {got} spins, expected {expected}")]
    ConfigurationLength { expected: usize, got: usize },

    #[error("spin {value} at vertex {vertex} is outside 0..{q}")]
    SpinOutOfRange { vertex: usize, value: usize, q: usize },

    #[error("labels and tree disagree: {0}")]
    LabelMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
