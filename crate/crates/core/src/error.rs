use alloc::string::String;
use thiserror::Error;

/// Errors raised by the numerical stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("not a Rogers function: re(f(xi)/xi) = {value:e} at xi = {re}{im:+}i")]
    RogersViolation { re: f64, im: f64, value: f64 },
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("quadrature did not converge (partial value {re}{im:+}i, error estimate {err_estimate:e})")]
    Quadrature { re: f64, im: f64, err_estimate: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("method unsupported: {0}")]
    Unsupported(String),
    #[error("spine is undefined for a constant function")]
    SpineUndefined,
    #[error("boundary angle estimation failed at s = {0}")]
    Estimation(f64),
    #[error("Stieltjes inversion unstable: {0}")]
    Inversion(String),
    #[error("normalization convention violated: {0}")]
    Convention(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), message: message.into() }
    }
}
