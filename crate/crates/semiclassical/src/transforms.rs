//! Spectral transformations of a functional: point masses (Uvarov),
//! multiplication by `x − ω` (Christoffel), division by `x − ω` plus a mass
//! (Geronimus), truncation of the support and symmetrization.
//!
//! All normalizing constants are fixed to 1. A transformed functional is
//! again a [`FunctionalSpec`], so transforms compose.

use crate::exact::{falling_factorial, Precision, Ring, Scalar};
use crate::functional::{
    moments, pearson_pair, stieltjes_eval, FunctionalError, FunctionalSpec, Mass, MomentTable, Support,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    Uvarov {
        omega: Scalar,
        #[serde(rename = "M")]
        mass: Scalar,
    },
    Christoffel {
        omega: Scalar,
    },
    Geronimus {
        omega: Scalar,
        #[serde(rename = "M")]
        mass: Scalar,
    },
    Truncate {
        #[serde(rename = "N")]
        n: u64,
    },
    Symmetrize {
        m: u64,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("regularity condition fails: {0}")]
    RegularityViolation(String),
    #[error("ω = {omega} is a support point")]
    PoleAtSupportPoint { omega: Scalar },
    #[error("not representable as a hypergeometric weight: {0}")]
    NotRepresentable(String),
    #[error("symmetrized functional is degenerate (ν₀ = 0)")]
    DegenerateSymmetrization { spec: Box<FunctionalSpec> },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

impl TransformError {
    /// True for errors caused by the input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            TransformError::Functional(e) => !matches!(e, FunctionalError::Hyper(_)),
            _ => true,
        }
    }
}

/// `(ν₀, ν₁)` of a spec.
fn first_moments(spec: &FunctionalSpec, prec: Precision) -> Result<(Scalar, Scalar), TransformError> {
    let m = moments(spec, 1, prec)?;
    Ok((m.moments[0].clone(), m.moments[1].clone()))
}

/// Adds the mass `M δ_ω`.
pub fn apply_uvarov(
    spec: &FunctionalSpec,
    omega: &Scalar,
    mass: &Scalar,
    prec: Precision,
) -> Result<FunctionalSpec, TransformError> {
    let (nu0, _) = first_moments(spec, prec)?;
    if (nu0 + mass.clone()).is_zero() {
        return Err(TransformError::RegularityViolation("L[1] + M = 0".into()));
    }
    let mut out = spec.clone();
    match out.masses.iter_mut().find(|m| m.omega == *omega) {
        Some(m) => m.mass = m.mass.clone() + mass.clone(),
        None => out.masses.push(Mass { omega: omega.clone(), mass: mass.clone() }),
    }
    Ok(out)
}

/// `L_C[r] = L[(x − ω) r]`.
pub fn apply_christoffel(
    spec: &FunctionalSpec,
    omega: &Scalar,
    prec: Precision,
) -> Result<FunctionalSpec, TransformError> {
    let (nu0, nu1) = first_moments(spec, prec)?;
    let w = omega.clone() + spec.shift_scalar();
    if (nu1 - w.clone() * nu0).is_zero() {
        return Err(TransformError::RegularityViolation("L[x − ω] = 0".into()));
    }
    if w.is_natural() && spec.support_end().is_none_or(|e| w.to_f64().round() as u64 <= e) {
        return Err(TransformError::NotRepresentable(format!(
            "weight (x − ω) vanishes at the support point ω = {omega}"
        )));
    }
    // (x − w) = (−w) (1 − w)_x / (−w)_x
    let one = Scalar::one();
    let mut out = spec.clone();
    out.a.push(one.clone() - w.clone());
    out.b.push(-w.clone() - one);
    out.scale = out.scale.clone() * -w;
    out.masses = spec
        .masses
        .iter()
        .filter(|m| m.omega != *omega)
        .map(|m| Mass { omega: m.omega.clone(), mass: m.mass.clone() * (m.omega.clone() - omega.clone()) })
        .collect();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeronimusResult {
    pub spec: FunctionalSpec,
    /// `ν₀^G = M − S(ω)`.
    pub nu0: Scalar,
}

/// `L_G[r] = L[r/(x − ω)] + M r(ω)`, read as `L[(r(x) − r(ω))/(x − ω)] + (M − S(ω)) r(ω)`.
pub fn apply_geronimus(
    spec: &FunctionalSpec,
    omega: &Scalar,
    mass: &Scalar,
    prec: Precision,
) -> Result<GeronimusResult, TransformError> {
    let w = omega.clone() + spec.shift_scalar();
    if w.is_natural() {
        return Err(TransformError::PoleAtSupportPoint { omega: omega.clone() });
    }
    if spec.masses.iter().any(|m| m.omega == *omega) {
        return Err(TransformError::PoleAtSupportPoint { omega: omega.clone() });
    }
    let s = stieltjes_eval(spec, omega, prec)?;
    let nu0 = mass.clone() - s;
    if nu0.is_zero() {
        return Err(TransformError::RegularityViolation("M − S(ω) = 0".into()));
    }
    // 1/(x − w) = (−1/w) (−w)_x / (1 − w)_x
    let mut out = spec.clone();
    out.a.push(-w.clone());
    out.b.push(-w.clone());
    out.scale = out.scale.clone() * -(Scalar::one() / w);
    out.masses = spec
        .masses
        .iter()
        .map(|m| Mass { omega: m.omega.clone(), mass: m.mass.clone() / (m.omega.clone() - omega.clone()) })
        .collect();
    out.masses.push(Mass { omega: omega.clone(), mass: mass.clone() });
    Ok(GeronimusResult { spec: out, nu0 })
}

/// Restricts the support to `0..=N`.
pub fn apply_truncation(spec: &FunctionalSpec, n: u64) -> Result<FunctionalSpec, TransformError> {
    if spec.support != Support::Infinite || !spec.masses.is_empty() {
        return Err(TransformError::NotRepresentable(
            "truncation applies to a plain weight on the nonnegative integers".into(),
        ));
    }
    let out = spec.clone().with_support(Support::Truncated { n });
    pearson_pair(&out)?;
    Ok(out)
}

/// Symmetrizes on `[−m, m]`. The result is the one-sided weight on
/// `0..=2m` read in the shifted variable `x − m`.
pub fn apply_symmetrization(
    spec: &FunctionalSpec,
    m: u64,
    prec: Precision,
) -> Result<FunctionalSpec, TransformError> {
    if m == 0 {
        return Err(TransformError::NotRepresentable("m must be positive".into()));
    }
    if spec.support != Support::Infinite || !spec.masses.is_empty() {
        return Err(TransformError::NotRepresentable(
            "symmetrization applies to a plain weight on the nonnegative integers".into(),
        ));
    }
    let (a, b) = spec.reduced_parameters();
    let big_n = Scalar::int(2 * m as i64);
    let p = a.len();
    let q = b.len();
    let z0 = if (p + q + 1) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    let eta_root = a.iter().any(|ai| *ai == -big_n.clone());
    let mut a2 = a.clone();
    if !eta_root {
        a2.push(-big_n.clone());
    }
    a2.extend(b.iter().map(|bj| -big_n.clone() - bj.clone()));
    let mut b2 = b.clone();
    b2.extend(a.iter().filter(|ai| **ai != -big_n.clone()).map(|ai| -big_n.clone() - ai.clone()));
    let out = FunctionalSpec {
        a: a2,
        b: b2,
        z: z0,
        support: Support::SymmetrizedShift { m },
        masses: Vec::new(),
        scale: Scalar::one(),
    };
    out.validate()?;
    let nu0 = moments(&out, 0, prec)?.moments[0].clone();
    if nu0.is_zero() {
        return Err(TransformError::DegenerateSymmetrization { spec: Box::new(out) });
    }
    Ok(out)
}

/// Symmetrized spec without the degeneracy check.
pub fn symmetrized_spec(spec: &FunctionalSpec, m: u64, prec: Precision) -> Result<FunctionalSpec, TransformError> {
    match apply_symmetrization(spec, m, prec) {
        Err(TransformError::DegenerateSymmetrization { spec }) => Ok(*spec),
        other => other,
    }
}

pub fn apply_transform(
    spec: &FunctionalSpec,
    kind: &TransformKind,
    prec: Precision,
) -> Result<FunctionalSpec, TransformError> {
    match kind {
        TransformKind::Uvarov { omega, mass } => apply_uvarov(spec, omega, mass, prec),
        TransformKind::Christoffel { omega } => apply_christoffel(spec, omega, prec),
        TransformKind::Geronimus { omega, mass } => Ok(apply_geronimus(spec, omega, mass, prec)?.spec),
        TransformKind::Truncate { n } => apply_truncation(spec, *n),
        TransformKind::Symmetrize { m } => apply_symmetrization(spec, *m, prec),
    }
}

/// `ν_n^U = ν_n + M φ_n(w)`, `w` in the moment basis coordinate.
pub fn uvarov_moments<R: Ring>(nu: &[R], w: &R, mass: &R) -> Vec<R> {
    nu.iter()
        .enumerate()
        .map(|(n, v)| v.clone() + mass.clone() * falling_factorial(w, n))
        .collect()
}

/// `ν_n^C = ν_{n+1} + (n − w) ν_n`; one entry shorter than the input.
pub fn christoffel_moments<R: Ring>(nu: &[R], w: &R) -> Vec<R> {
    (0..nu.len().saturating_sub(1))
        .map(|n| nu[n + 1].clone() + (R::from_int(n as i64) - w.clone()) * nu[n].clone())
        .collect()
}

/// Solves `ν_{n+1}^G + (n − w) ν_n^G = ν_n` from `ν₀^G`; one entry longer than the input.
pub fn geronimus_moments<R: Ring>(nu: &[R], w: &R, nu0: &R) -> Vec<R> {
    let mut out = vec![nu0.clone()];
    for (n, v) in nu.iter().enumerate() {
        let next = v.clone() - (R::from_int(n as i64) - w.clone()) * out[n].clone();
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComposeReport {
    /// Christoffel after Geronimus returns the original spec.
    pub cg_spec_matches: bool,
    /// Geronimus after Christoffel equals the Uvarov spec.
    pub gc_spec_matches: bool,
    pub cg_moments_match: bool,
    pub gc_moments_match: bool,
    pub failures: Vec<String>,
}

impl ComposeReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn tables_match(x: &MomentTable, y: &MomentTable, tol: &Scalar) -> bool {
    x.basis_shift == y.basis_shift
        && x.len() == y.len()
        && x.moments.iter().zip(&y.moments).all(|(p, q)| match (p.is_exact(), q.is_exact()) {
            (true, true) => p == q,
            _ => p.close_to(q, tol),
        })
}

/// Checks `L_CG = L` and `L_GC = L_U` on the first ten moments and at the
/// level of canonical specs.
pub fn compose_check(
    spec: &FunctionalSpec,
    omega: &Scalar,
    mass: &Scalar,
    prec: Precision,
) -> Result<ComposeReport, TransformError> {
    const K: usize = 9;
    let tol = Precision::digits(prec.digits.saturating_sub(5)).epsilon();
    let mut failures = Vec::new();
    let base = moments(spec, K, prec)?;

    let g = apply_geronimus(spec, omega, mass, prec)?;
    let cg = apply_christoffel(&g.spec, omega, prec)?;
    let cg_spec_matches = cg.canonical() == spec.canonical();
    let cg_moments_match = tables_match(&moments(&cg, K, prec)?, &base, &tol);

    let c = apply_christoffel(spec, omega, prec)?;
    let gc = apply_geronimus(&c, omega, mass, prec)?.spec;
    let u = apply_uvarov(spec, omega, mass, prec)?;
    let gc_spec_matches = gc.canonical() == u.canonical();
    let gc_moments_match = tables_match(&moments(&gc, K, prec)?, &moments(&u, K, prec)?, &tol);

    for (ok, what) in [
        (cg_spec_matches, "CG spec differs from the original"),
        (cg_moments_match, "CG moments differ from the original"),
        (gc_spec_matches, "GC spec differs from the Uvarov spec"),
        (gc_moments_match, "GC moments differ from the Uvarov moments"),
    ] {
        if !ok {
            failures.push(what.to_string());
        }
    }
    Ok(ComposeReport { cg_spec_matches, gc_spec_matches, cg_moments_match, gc_moments_match, failures })
}
