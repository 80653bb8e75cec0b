use thiserror::Error;

/// Failures of a command invocation. Usage problems exit with status 2,
/// domain errors from the kernel with status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("symbol '{symbol}' at column {column} is not allowed in {context} context")]
    Context { symbol: char, column: usize, context: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(#[from] integrabilis_core::Error),
}

impl CliError {
    pub fn syntax(column: usize, message: impl Into<String>) -> Self {
        CliError::Syntax { column, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } => "SyntaxError",
            CliError::Context { .. } => "ContextError",
            CliError::Usage(_) => "UsageError",
            CliError::Domain(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}
