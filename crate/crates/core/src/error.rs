use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("search for {what} exhausted its bound {bound}")]
    SearchExhausted { what: String, bound: u64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("ideal-norm budget {budget} exceeded (needed {needed}) for {what}; supply a curated value")]
    BudgetExceeded { what: String, needed: u64, budget: u64 },

    #[error("non-integral fiber size {value} ({context})")]
    NonIntegral { value: String, context: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed table rows: {}", format_rows(.0))]
    Table(Vec<(usize, String)>),

    #[error("conflicting values for {key}: {left} vs {right}")]
    Conflict { key: String, left: String, right: String },

    #[error("{line}:{column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_rows(rows: &[(usize, String)]) -> String {
    rows.iter().map(|(l, m)| format!("line {l}: {m}")).collect::<Vec<_>>().join("; ")
}
