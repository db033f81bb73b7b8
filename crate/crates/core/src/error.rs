use thiserror::Error;

/// Schema violation in a JSON input, qualified by the path of the offending field.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: &str, message: &str) -> Self {
        Self {
            path: path.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not orthogonal (max |RᵀR - I| = {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("unknown material `{0}`")]
    UnknownMaterial(String),
    #[error("material evaluation failed: {0}")]
    Material(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
