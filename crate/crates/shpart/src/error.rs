use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1} variables")]
    Dimension(u32, u32),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("variable x{0} out of range (nvars = {1})")]
    VariableOutOfRange(u32, u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("formula is not UPT")]
    NotUpt,
    #[error("formula is not homogeneous")]
    Inhomogeneous,
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
