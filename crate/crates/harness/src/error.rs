use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// A configuration value is malformed or inconsistent. `pointer` is the
    /// JSON pointer of the offending value (`""` for the document root).
    #[error("config {}: {message}", display_pointer(pointer))]
    Schema { pointer: String, message: String },
    #[error(transparent)]
    Core(#[from] semiclassical::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// An input artifact (CSV, sidecar) could not be used.
    #[error("{}: {message}", path.display())]
    Artifact { path: PathBuf, message: String },
}

fn display_pointer(p: &str) -> &str {
    if p.is_empty() {
        "/"
    } else {
        p
    }
}

impl HarnessError {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema { pointer: pointer.into(), message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn artifact(path: &Path, message: impl Into<String>) -> Self {
        Self::Artifact { path: path.to_path_buf(), message: message.into() }
    }

    /// JSON pointer of a schema error.
    pub fn pointer(&self) -> Option<&str> {
        match self {
            Self::Schema { pointer, .. } => Some(pointer),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
