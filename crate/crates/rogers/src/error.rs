use serde::Serialize;

/// Exit status of a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    ChecksFailed = 1,
    InputError = 2,
}

/// Error reported to the user as `{code, message, field}`.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{code}: {message}")]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub field: Option<String>,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into(), field: None }
    }

    pub fn with_field(mut self, field: impl Into<String>) -> Self {
        self.field = Some(field.into());
        self
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::new("io", format!("{}: {err}", path.display())).with_field(path.display().to_string())
    }
}

impl From<rogers_core::Error> for CliError {
    fn from(e: rogers_core::Error) -> Self {
        use rogers_core::Error as E;
        let code = match &e {
            E::Argument(_) => "argument",
            E::Validation { .. } => "validation",
            E::RogersViolation { .. } => "rogers_violation",
            E::Domain(_) => "domain",
            E::Quadrature { .. } | E::NonFinite(_) => "quadrature",
            E::Unsupported(_) => "unsupported",
            E::SpineUndefined => "spine_undefined",
            E::Estimation(_) => "estimation",
            E::Inversion(_) => "inversion",
            E::Convention(_) => "convention",
        };
        let field = match &e {
            E::Validation { field, .. } => Some(field.clone()),
            _ => None,
        };
        CliError { code, message: e.to_string(), field }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}
