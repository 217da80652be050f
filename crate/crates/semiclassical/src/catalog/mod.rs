//! Catalog of the hypergeometric semiclassical families of class 0, 1 and 2
//! together with their Uvarov, Christoffel, Geronimus, truncated and
//! symmetrized subcases.
//!
//! Entries live in `catalog/families.json`. Every parameter, template and
//! tabulated formula is a string in the small language of [`expr`], so the
//! same fixture drives numeric instantiation and exact symbolic checks.

pub mod expr;
mod suite;

pub use suite::{run_entry, run_suite, CheckOutcome, CheckStatus, EntryReport, SuiteOptions, SuiteReport};

use crate::exact::{Precision, Ring, Scalar};
use crate::functional::{moments, FunctionalError, FunctionalSpec, Mass, Support};
use crate::transforms::{TransformError, TransformKind};
use expr::{parse, ExprError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const DATA: &str = include_str!("../../catalog/families.json");

/// Canonical entries and subcases the catalog must contain.
pub const CANONICAL_COUNT: usize = 15;
pub const SUBCASE_COUNT: usize = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Canonical,
    Subcase,
    /// Building blocks and discarded cases that are not counted.
    Auxiliary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Nonzero,
    NotIn,
    /// Not in `{0, 1, 2, ...}`.
    NotNatural,
    /// Not in `{-1, -2, ...}`, so that `(b+1)_x` never vanishes.
    NotNegativeInteger,
    PositiveInteger,
    /// `L[1] ≠ 0` for the instantiated functional.
    TotalMassNonzero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

impl Constraint {
    pub fn describe(&self) -> String {
        let p = self.param.as_deref().unwrap_or("?");
        match self.rule {
            Rule::Nonzero => format!("{p} ≠ 0"),
            Rule::NotIn => format!("{p} ∉ {{{}}}", self.values.join(", ")),
            Rule::NotNatural => format!("{p} ∉ ℕ₀"),
            Rule::NotNegativeInteger => format!("{p} ∉ {{-1, -2, ...}}"),
            Rule::PositiveInteger => format!("{p} ∈ {{1, 2, ...}}"),
            Rule::TotalMassNonzero => "L[1] ≠ 0".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportTemplate {
    #[default]
    Infinite,
    Truncated {
        #[serde(rename = "N")]
        n: String,
    },
    SymmetrizedShift {
        m: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassTemplate {
    pub omega: String,
    #[serde(rename = "M")]
    pub mass: String,
}

/// Weight data with expressions in the entry parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTemplate {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub z: String,
    #[serde(default)]
    pub support: SupportTemplate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub masses: Vec<MassTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformTemplate {
    Uvarov {
        omega: String,
        #[serde(rename = "M")]
        mass: String,
    },
    Christoffel {
        omega: String,
    },
    Geronimus {
        omega: String,
        #[serde(rename = "M")]
        mass: String,
    },
    Truncate {
        #[serde(rename = "N")]
        n: String,
    },
    Symmetrize {
        m: String,
    },
}

/// How a subcase arises from another entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub base: String,
    /// Base parameters as expressions in this entry's parameters.
    #[serde(default)]
    pub with: BTreeMap<String, String>,
    pub transforms: Vec<TransformTemplate>,
}

/// A tabulated Stieltjes equation `σ(t+1)S(t+1) − η(t)S(t) = ξ(t)`.
///
/// `nu0, nu1, ...` are the family's own moments, `mu0, mu1, ...` the moments
/// of the base functional of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrintedEquation {
    pub sigma_shift: String,
    pub eta: String,
    pub xi: String,
    /// Replacement parts for a misprinted equation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<Correction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: EntryKind,
    pub class: usize,
    pub name: String,
    /// Heading of the section that tabulates the family.
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    /// Parameter names with default values.
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<Constraint>,
    /// Parent parameters that produce this subcase.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub special_values: BTreeMap<String, String>,
    /// Lattice shift `x → x + shift` applied after the special values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    pub family: FamilyTemplate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    /// Admissible mass locations, each fixing `omega` (and `Omega`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed: Vec<PrintedEquation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_failure: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{entry}` has no parameter `{name}`")]
    UnknownParameter { entry: String, name: String },
    #[error("entry `{entry}`: no mass variant at omega = {omega}")]
    UnknownVariant { entry: String, omega: Scalar },
    #[error("entry `{entry}`: constraint {condition} violated")]
    ConstraintViolated { entry: String, condition: String },
    #[error("entry `{entry}`: `{name}` = {value} must be a nonnegative integer")]
    NotInteger { entry: String, name: String, value: Scalar },
    #[error("catalog data: {0}")]
    Data(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// A catalog entry with every parameter fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: String,
    pub values: BTreeMap<String, Scalar>,
    pub variant: Option<usize>,
    pub spec: FunctionalSpec,
}

impl Catalog {
    /// The built-in catalog.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(DATA).expect("built-in catalog parses"))
    }

    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        serde_json::from_str(text).map_err(|e| CatalogError::Data(e.to_string()))
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))
    }

    pub fn count(&self, kind: EntryKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }

    /// Instantiates an entry; unspecified parameters take their defaults.
    pub fn instantiate(&self, id: &str, assignments: &BTreeMap<String, Scalar>) -> Result<Instance, CatalogError> {
        let entry = self.get(id)?;
        instantiate_entry(entry, assignments, None, Precision::DEFAULT)
    }
}

fn canonical_name(name: &str) -> &str {
    match name {
        "ω" => "omega",
        "Ω" => "Omega",
        other => other,
    }
}

pub(crate) fn eval_str(s: &str, env: &BTreeMap<String, Scalar>) -> Result<Scalar, CatalogError> {
    Ok(parse(s)?.eval(env)?)
}

fn as_count(entry: &CatalogEntry, name: &str, s: &str, env: &BTreeMap<String, Scalar>) -> Result<u64, CatalogError> {
    let v = eval_str(s, env)?;
    match v.as_i64() {
        Some(k) if k >= 0 && v.is_integer() => Ok(k as u64),
        _ => Err(CatalogError::NotInteger { entry: entry.id.clone(), name: name.to_string(), value: v }),
    }
}

/// Parameter values of an entry: defaults, then assignments, then the
/// chosen mass variant.
pub(crate) fn entry_values(
    entry: &CatalogEntry,
    assignments: &BTreeMap<String, Scalar>,
    variant: Option<usize>,
) -> Result<(BTreeMap<String, Scalar>, Option<usize>), CatalogError> {
    let mut env = BTreeMap::new();
    for (k, v) in &entry.params {
        env.insert(k.clone(), eval_str(v, &BTreeMap::new())?);
    }
    let mut fixed = BTreeMap::new();
    for (k, v) in assignments {
        let k = canonical_name(k);
        let variant_name = !entry.variants.is_empty() && (k == "omega" || k == "Omega");
        if !env.contains_key(k) && !variant_name {
            return Err(CatalogError::UnknownParameter { entry: entry.id.clone(), name: k.to_string() });
        }
        if variant_name {
            fixed.insert(k.to_string(), v.clone());
        } else {
            env.insert(k.to_string(), v.clone());
        }
    }
    if entry.variants.is_empty() {
        return Ok((env, None));
    }
    let values_of = |i: usize| -> Result<BTreeMap<String, Scalar>, CatalogError> {
        entry.variants[i].iter().map(|(k, v)| Ok((k.clone(), eval_str(v, &env)?))).collect()
    };
    let index = match (variant, fixed.get("omega")) {
        (Some(i), _) => i,
        (None, Some(w)) => {
            let mut found = None;
            for i in 0..entry.variants.len() {
                if values_of(i)?.get("omega") == Some(w) {
                    found = Some(i);
                    break;
                }
            }
            found.ok_or_else(|| CatalogError::UnknownVariant { entry: entry.id.clone(), omega: w.clone() })?
        }
        (None, None) => 0,
    };
    let chosen = values_of(index)?;
    for (k, v) in &fixed {
        if chosen.get(k) != Some(v) {
            return Err(CatalogError::UnknownVariant { entry: entry.id.clone(), omega: v.clone() });
        }
    }
    env.extend(chosen);
    Ok((env, Some(index)))
}

fn check_constraint(
    entry: &CatalogEntry,
    c: &Constraint,
    env: &BTreeMap<String, Scalar>,
    spec: &FunctionalSpec,
    prec: Precision,
) -> Result<(), CatalogError> {
    let violated = || CatalogError::ConstraintViolated { entry: entry.id.clone(), condition: c.describe() };
    if c.rule == Rule::TotalMassNonzero {
        let nu0 = moments(spec, 0, prec)?.moments[0].clone();
        return if nu0.is_zero() { Err(violated()) } else { Ok(()) };
    }
    let name = c.param.as_deref().ok_or_else(|| CatalogError::Data(format!("{}: rule without param", entry.id)))?;
    let v = env
        .get(name)
        .ok_or_else(|| CatalogError::Data(format!("{}: constraint on unknown `{name}`", entry.id)))?;
    let ok = match c.rule {
        Rule::Nonzero => !v.is_zero(),
        Rule::NotIn => {
            for s in &c.values {
                if eval_str(s, env)? == *v {
                    return Err(violated());
                }
            }
            true
        }
        Rule::NotNatural => !v.is_natural(),
        Rule::NotNegativeInteger => !(v.is_integer() && v.signum() < 0),
        Rule::PositiveInteger => v.is_natural() && !v.is_zero(),
        Rule::TotalMassNonzero => unreachable!(),
    };
    if ok {
        Ok(())
    } else {
        Err(violated())
    }
}

/// Builds the functional of a family template at fixed parameter values.
pub(crate) fn build_spec(
    entry: &CatalogEntry,
    env: &BTreeMap<String, Scalar>,
) -> Result<FunctionalSpec, CatalogError> {
    let t = &entry.family;
    let list = |v: &[String]| v.iter().map(|s| eval_str(s, env)).collect::<Result<Vec<_>, _>>();
    let support = match &t.support {
        SupportTemplate::Infinite => Support::Infinite,
        SupportTemplate::Truncated { n } => Support::Truncated { n: as_count(entry, "N", n, env)? },
        SupportTemplate::SymmetrizedShift { m } => Support::SymmetrizedShift { m: as_count(entry, "m", m, env)? },
    };
    let masses = t
        .masses
        .iter()
        .map(|m| Ok(Mass { omega: eval_str(&m.omega, env)?, mass: eval_str(&m.mass, env)? }))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    let scale = match &t.scale {
        Some(s) => eval_str(s, env)?,
        None => Scalar::one(),
    };
    let spec = FunctionalSpec { a: list(&t.a)?, b: list(&t.b)?, z: eval_str(&t.z, env)?, support, masses, scale };
    spec.validate()?;
    Ok(spec)
}

pub(crate) fn instantiate_entry(
    entry: &CatalogEntry,
    assignments: &BTreeMap<String, Scalar>,
    variant: Option<usize>,
    prec: Precision,
) -> Result<Instance, CatalogError> {
    let (env, variant) = entry_values(entry, assignments, variant)?;
    // parameter-only constraints first, so that a bad N never reaches the weight
    for c in entry.constraints.iter().filter(|c| c.rule != Rule::TotalMassNonzero) {
        check_constraint(entry, c, &env, &FunctionalSpec::new(vec![], vec![], Scalar::one()), prec)?;
    }
    let spec = build_spec(entry, &env)?;
    for c in entry.constraints.iter().filter(|c| c.rule == Rule::TotalMassNonzero) {
        check_constraint(entry, c, &env, &spec, prec)?;
    }
    Ok(Instance { id: entry.id.clone(), values: env, variant, spec })
}

/// Numeric transform from a template.
pub(crate) fn transform_kind(
    entry: &CatalogEntry,
    t: &TransformTemplate,
    env: &BTreeMap<String, Scalar>,
) -> Result<TransformKind, CatalogError> {
    Ok(match t {
        TransformTemplate::Uvarov { omega, mass } => {
            TransformKind::Uvarov { omega: eval_str(omega, env)?, mass: eval_str(mass, env)? }
        }
        TransformTemplate::Christoffel { omega } => TransformKind::Christoffel { omega: eval_str(omega, env)? },
        TransformTemplate::Geronimus { omega, mass } => {
            TransformKind::Geronimus { omega: eval_str(omega, env)?, mass: eval_str(mass, env)? }
        }
        TransformTemplate::Truncate { n } => TransformKind::Truncate { n: as_count(entry, "N", n, env)? },
        TransformTemplate::Symmetrize { m } => TransformKind::Symmetrize { m: as_count(entry, "m", m, env)? },
    })
}
