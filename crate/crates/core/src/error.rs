use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("negative exponent {0} cannot be expanded in a finite region")]
    NegativeExponentFinite(i64),
    #[error("vector support exceeds the window: weight {weight} > {cap}")]
    OutsideWindow { weight: u32, cap: u32 },
    #[error("expected a degree-0 element, found degree {0}")]
    NonzeroDegree(i64),
    #[error("module input rejected: {0}")]
    ModuleInput(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
