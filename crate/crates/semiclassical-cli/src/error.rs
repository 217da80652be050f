//! Error bodies and exit codes: 1 for computational failures, 2 for bad
//! input or violated constraints.

use semiclassical::catalog::CatalogError;
use semiclassical::equation::EquationError;
use semiclassical::functional::FunctionalError;
use semiclassical::orthopoly::OrthoError;
use semiclassical::transforms::TransformError;
use serde_json::{json, Value};

#[derive(Debug)]
pub struct CliError {
    kind: String,
    message: String,
    code: u8,
}

/// Variant name of an error enum, from its `Debug` form.
fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.to_string(), message: message.into(), code: 2 }
    }

    fn compute(kind: String, message: String) -> Self {
        CliError { kind, message, code: 1 }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError::compute("Internal".into(), e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }

    pub fn body(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message }, "exit_code": self.code })
    }
}

impl From<FunctionalError> for CliError {
    fn from(e: FunctionalError) -> Self {
        match &e {
            FunctionalError::Hyper(h) => CliError::compute(variant(h), e.to_string()),
            _ => CliError { kind: variant(&e), message: e.to_string(), code: 2 },
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Functional(f) => f.into(),
            TransformError::RegularityViolation(_)
            | TransformError::PoleAtSupportPoint { .. }
            | TransformError::NotRepresentable(_) => CliError::input("ConstraintViolated", e.to_string()),
            TransformError::DegenerateSymmetrization { .. } => CliError::input("DegenerateSymmetrization", e.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Functional(f) => f.into(),
            CatalogError::Transform(t) => t.into(),
            CatalogError::Data(_) => CliError::input("CatalogData", e.to_string()),
            _ => CliError { kind: variant(&e), message: e.to_string(), code: 2 },
        }
    }
}

impl From<EquationError> for CliError {
    fn from(e: EquationError) -> Self {
        match e {
            EquationError::Functional(f) => f.into(),
            _ => CliError::compute(variant(&e), e.to_string()),
        }
    }
}

impl From<OrthoError> for CliError {
    fn from(e: OrthoError) -> Self {
        match e {
            OrthoError::Functional(f) => f.into(),
            OrthoError::DegreeCap { .. } => CliError::input("DegreeCap", e.to_string()),
            _ => CliError::compute(variant(&e), e.to_string()),
        }
    }
}
