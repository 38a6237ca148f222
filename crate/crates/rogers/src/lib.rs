//! Command-line front end for `rogers-core`: spec files, artifacts and
//! verification suites.
//!
//! Exit codes: `0` on success, `1` when a verification suite reports
//! failures (the report is still written), `2` on input or computation
//! errors, which are printed to stderr as `{code, message, field}`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod specfile;
pub mod verify;

pub use error::{CliError, Status};
pub use specfile::{emit_spec, load_spec, load_spec_str, parse_spec};
