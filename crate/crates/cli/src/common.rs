use std::fs;
use std::path::Path;

use clap::ValueEnum;
use dominion_core::{ColoredStochasticDataset, Error, ExactNumber};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

/// Machine-readable error printed on validation failures.
#[derive(Debug, Serialize)]
pub struct ErrorObject {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl From<Error> for ErrorObject {
    fn from(e: Error) -> Self {
        let details = match &e {
            Error::Collinear(a, b, c) => Some(json!({ "collinear_triple": [a, b, c] })),
            Error::DuplicatePoint(a, b) => Some(json!({ "points": [a, b] })),
            Error::DuplicateId(id) => Some(json!({ "id": id })),
            Error::ProbabilityOutOfRange { id, prob } => Some(json!({ "id": id, "prob": prob.to_string() })),
            Error::CapExceeded { n, cap } => Some(json!({ "n": n, "cap": cap })),
            _ => None,
        };
        ErrorObject {
            error: ErrorBody {
                kind: e.kind().to_string(),
                message: e.to_string(),
                details,
            },
        }
    }
}

pub enum Failure {
    Invalid(ErrorObject),
    /// A cross-check disagreed; the report is already printed.
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.into())
    }
}

pub fn invalid(kind: &str, message: impl Into<String>) -> Failure {
    Failure::Invalid(ErrorObject {
        error: ErrorBody {
            kind: kind.into(),
            message: message.into(),
            details: None,
        },
    })
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid("io", format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| invalid("io", format!("cannot write {}: {e}", path.display())))
}

pub fn read_dataset(path: &Path) -> Result<ColoredStochasticDataset, Failure> {
    Ok(ColoredStochasticDataset::from_json(&read_text(path)?)?)
}

pub fn parse_exact(s: &str) -> Result<ExactNumber, String> {
    s.parse::<ExactNumber>().map_err(|e| e.to_string())
}
