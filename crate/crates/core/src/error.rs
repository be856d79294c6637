use std::fmt;

use thiserror::Error;

/// A positioned problem found while reading a context description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("module has {size} elements, above the enumeration cap of {cap}")]
    SizeLimit { size: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<Diagnostic>),
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
