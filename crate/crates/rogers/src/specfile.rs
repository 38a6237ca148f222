//! Spec files: a JSON object with a `"type"` tag and the payload fields of
//! the corresponding family.

use std::path::Path;

use rogers_core::rogers::{validate_spec, LevyAtomic, PhiRep, RationalProduct, RogersSpec, StableSum};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::CliError;
use crate::output::to_json;

/// Points sampled by the positivity check of `re(f(ξ)/ξ)` on load.
pub const VALIDATION_SAMPLES: usize = 256;

pub const SPEC_TYPES: [&str; 4] = ["levy_atomic", "stable_sum", "rational_product", "phi_table"];

fn payload<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let field = e.path().to_string();
        CliError::new("parse", e.inner().to_string()).with_field(field)
    })
}

/// Parse a spec document without validating it.
pub fn parse_spec(text: &str) -> Result<RogersSpec, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::new("parse", e.to_string()))?;
    let Value::Object(mut map) = v else {
        return Err(CliError::new("parse", "spec must be a JSON object"));
    };
    let tag = match map.remove("type") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(CliError::new("parse", "\"type\" must be a string").with_field("type")),
        None => return Err(CliError::new("parse", "missing \"type\"").with_field("type")),
    };
    let body = Value::Object(map);
    Ok(match tag.as_str() {
        "levy_atomic" => RogersSpec::LevyAtomic(payload::<LevyAtomic>(body)?),
        "stable_sum" => RogersSpec::StableSum(payload::<StableSum>(body)?),
        "rational_product" => RogersSpec::RationalProduct(payload::<RationalProduct>(body)?),
        "phi_table" => RogersSpec::PhiRep(payload::<PhiRep>(body)?),
        other => {
            return Err(CliError::new(
                "unknown_spec_type",
                format!("unknown spec type {other:?}, expected one of {}", SPEC_TYPES.join(", ")),
            )
            .with_field("type"))
        }
    })
}

/// Parse and validate; returns the normalized spec.
pub fn load_spec_str(text: &str) -> Result<RogersSpec, CliError> {
    let spec = parse_spec(text)?;
    Ok(validate_spec(&spec, VALIDATION_SAMPLES)?.spec)
}

pub fn load_spec(path: &Path) -> Result<RogersSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    load_spec_str(&text)
}

/// Render a spec in the file format.
pub fn emit_spec(spec: &RogersSpec) -> Result<String, CliError> {
    if matches!(spec, RogersSpec::Shifted { .. }) {
        return Err(CliError::new("unsupported", "shifted specs have no file form"));
    }
    Ok(to_json(spec))
}
