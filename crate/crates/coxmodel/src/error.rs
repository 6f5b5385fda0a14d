use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid model index: {0}")]
    InvalidIndex(String),
    #[error("unresolved degenerate mass in {0}")]
    Unresolved(String),
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u64, cap: u64 },
    #[error("oracle assertion failed: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, CoxError>;
