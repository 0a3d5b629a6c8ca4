use std::path::PathBuf;

use serde_json::{json, Map, Value};

/// Anything that makes a command exit with status 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or structurally wrong prescription JSON.
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    /// Malformed Matrix Market file.
    #[error("line {line}: {message}")]
    MatrixMarket { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hritz_core::Error),
}

impl CliError {
    pub(crate) fn json(path: &str, message: impl Into<String>) -> Self {
        CliError::Json {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        use hritz_core::Error as E;
        match self {
            CliError::Json { .. } => "parse",
            CliError::MatrixMarket { .. } => "format",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                E::Admissibility(_) => "admissibility",
                E::DegeneratePrescription { .. } => "degenerate_prescription",
                E::SingularR { .. } => "singular_r",
                E::PrematureTermination { .. } => "premature_termination",
                E::Internal(_) => "internal",
                _ => "numeric",
            },
        }
    }

    /// Single-line JSON record for stderr.
    pub fn record(&self) -> String {
        let mut m = Map::new();
        m.insert("error".into(), json!(self.kind()));
        m.insert("message".into(), json!(self.to_string()));
        match self {
            CliError::Json { path, .. } => {
                m.insert("path".into(), json!(path));
            }
            CliError::MatrixMarket { line, .. } => {
                m.insert("line".into(), json!(line));
            }
            CliError::Io { path, .. } => {
                m.insert("file".into(), json!(path.display().to_string()));
            }
            CliError::Core(hritz_core::Error::Admissibility(v)) => {
                let list: Vec<Value> = v
                    .iter()
                    .map(|x| json!({ "step": x.step, "violation": x.to_string() }))
                    .collect();
                m.insert("violations".into(), Value::Array(list));
            }
            _ => {}
        }
        Value::Object(m).to_string()
    }
}
