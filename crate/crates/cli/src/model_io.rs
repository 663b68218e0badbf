//! JSON model files.

use std::fs;
use std::path::{Path, PathBuf};

use agency_core::models::{validate_model, Model, ModelDescription, ValidationReport};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: invalid model\n{report}")]
    Validation { path: PathBuf, report: ValidationReport },
    #[error("{path}: {source}")]
    Model { path: PathBuf, source: agency_core::Error },
}

/// Parses and validates a model description. `path` only labels diagnostics.
pub fn parse_model(text: &str, path: &Path) -> Result<Model, ModelFileError> {
    let desc: ModelDescription = serde_json::from_str(text).map_err(|e| ModelFileError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let report = validate_model(&desc);
    if !report.is_valid() {
        return Err(ModelFileError::Validation { path: path.to_path_buf(), report });
    }
    Model::from_description(&desc).map_err(|source| ModelFileError::Model { path: path.to_path_buf(), source })
}

pub fn load_model(path: &Path) -> Result<Model, ModelFileError> {
    let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })?;
    parse_model(&text, path)
}

/// Pretty-printed JSON with a trailing newline.
pub fn model_to_json(model: &Model) -> String {
    let mut text = serde_json::to_string_pretty(&model.to_description()).expect("model descriptions serialize");
    text.push('\n');
    text
}

pub fn save_model(model: &Model, path: &Path) -> Result<(), ModelFileError> {
    fs::write(path, model_to_json(model)).map_err(|source| ModelFileError::Io { path: path.to_path_buf(), source })
}
