//! First-order difference equation `σ(t+1)S(t+1) − η(t)S(t) = ξ(t)` for the
//! Stieltjes transform, with `ξ` derived as linear forms in the moments.
//!
//! With `A(t,x) = (σ(t+1) − σ(x+1))/(t − x)` and `B(t,x) = −(η(t) − η(x))/(t − x)`
//! the Pearson relation telescopes the sum and leaves
//! `ξ(t) = L[A(t, x−1) + B(t, x)] + ϱ(x₀)σ(x₀)/(t + 1 − x₀)`,
//! where `x₀` is the left end of the lattice. The last term vanishes because
//! `σ(x₀) = 0`; it is checked rather than assumed.

use crate::exact::{BiPoly, Poly, Precision, Ring, Scalar};
use crate::functional::{
    class_of, moments, pearson_pair, stieltjes_eval, FunctionalError, FunctionalSpec, MomentTable, PearsonPair,
};
use crate::transforms::TransformKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquationError {
    #[error("boundary term σ(x₀)/(t + 1 − x₀) is not a polynomial")]
    NonPolynomialBoundary,
    #[error("ξ has degree {found} in t but the class is {expected}")]
    DegreeMismatch { expected: usize, found: i64 },
    #[error("λ(t,x) does not split as A·η(x) + B·σ(x+1)")]
    DecompositionFailed,
    #[error("need moments up to ν_{needed}, have {available}")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("moment basis shift {moments} does not match the lattice start {lattice}")]
    BasisMismatch { moments: Scalar, lattice: Scalar },
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("no equation rule for {0}")]
    NoRule(&'static str),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiTerm {
    pub t_power: usize,
    pub nu_coeffs: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StieltjesEquation {
    #[serde(with = "poly_coeffs")]
    pub sigma_shift: Poly<Scalar>,
    #[serde(with = "poly_coeffs")]
    pub eta: Poly<Scalar>,
    #[serde(with = "poly_coeffs")]
    pub xi: Poly<Scalar>,
    pub xi_symbolic: Vec<XiTerm>,
    pub basis_shift: Scalar,
}

mod poly_coeffs {
    use crate::exact::{Poly, Scalar};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Poly<Scalar>, s: S) -> Result<S::Ok, S::Error> {
        p.coeffs().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Poly<Scalar>, D::Error> {
        Ok(Poly::new(Vec::<Scalar>::deserialize(d)?))
    }
}

/// `ξ` as linear forms: entry `[j][n]` is the coefficient of `ν_n t^j`,
/// with moments taken in the basis `φ_n(x + shift)`.
pub type XiForms<R> = Vec<Vec<R>>;

fn shift_x<R: Ring>(p: &BiPoly<R>, c: &R) -> BiPoly<R> {
    p.map_x(|q| q.shift(c))
}

/// Derives the linear forms of `ξ` from a Pearson pair, over any ring.
pub fn xi_forms<R: Ring>(eta: &Poly<R>, sigma: &Poly<R>, shift: &R) -> Result<XiForms<R>, EquationError> {
    let one = R::one();
    let sigma1 = sigma.shift(&one);
    let sigma_t1 = BiPoly::lift_t(&sigma1);
    let sigma_x1 = BiPoly::lift_x(&sigma1);
    let eta_t = BiPoly::lift_t(eta);
    let eta_x = BiPoly::lift_x(eta);
    let tx = Poly::x();

    let big_lambda = sigma_t1.clone() * eta_x.clone() - eta_t.clone() * sigma_x1.clone();
    let lambda = big_lambda.exact_div_linear(&tx).ok_or(EquationError::DecompositionFailed)?;
    let a = (sigma_t1.clone() - sigma_x1.clone())
        .exact_div_linear(&tx)
        .ok_or(EquationError::DecompositionFailed)?;
    let b = -(eta_t - eta_x.clone())
        .exact_div_linear(&tx)
        .ok_or(EquationError::DecompositionFailed)?;
    if a.clone() * eta_x + b.clone() * sigma_x1 != lambda {
        return Err(EquationError::DecompositionFailed);
    }

    // ϱ(x₀)[σ(t+1) − (t + 1 − x₀) A(t, x₀ − 1)] = ϱ(x₀)σ(x₀)
    let x0 = -shift.clone();
    let a_left = a.eval_x(&(x0.clone() - one.clone()));
    let boundary = sigma1.clone() - Poly::new(vec![one.clone() - x0.clone(), one.clone()]) * a_left;
    if boundary.degree().is_some_and(|d| d > 0) || !sigma.eval(&x0).is_zero() {
        return Err(EquationError::NonPolynomialBoundary);
    }

    let kernel = shift_x(&a, &-one) + b;
    let forms: XiForms<R> = kernel
        .coeffs()
        .iter()
        .map(|k| k.shift(&-shift.clone()).to_falling())
        .collect();
    let found = forms.iter().rposition(|f| f.iter().any(|c| !c.is_zero())).map_or(-1, |j| j as i64);
    let expected = class_of(eta, sigma);
    if found != expected as i64 {
        return Err(EquationError::DegreeMismatch { expected, found });
    }
    Ok(forms.into_iter().take((found + 1) as usize).collect())
}

/// Highest moment index used by a set of forms.
pub fn forms_moment_span<R: Ring>(forms: &XiForms<R>) -> usize {
    forms
        .iter()
        .filter_map(|f| f.iter().rposition(|c| !c.is_zero()))
        .max()
        .unwrap_or(0)
}

fn instantiate_forms(forms: &XiForms<Scalar>, nu: &[Scalar]) -> Poly<Scalar> {
    Poly::new(
        forms
            .iter()
            .map(|f| f.iter().zip(nu).fold(Scalar::zero(), |acc, (c, v)| acc + c.clone() * v.clone()))
            .collect(),
    )
}

fn symbolic_terms(forms: &XiForms<Scalar>) -> Vec<XiTerm> {
    forms
        .iter()
        .enumerate()
        .map(|(j, f)| XiTerm { t_power: j, nu_coeffs: f.clone() })
        .collect()
}

fn build(pair_eta: &Poly<Scalar>, pair_sigma: &Poly<Scalar>, shift: &Scalar, xi: Poly<Scalar>) -> Result<StieltjesEquation, EquationError> {
    let forms = xi_forms(pair_eta, pair_sigma, shift)?;
    Ok(StieltjesEquation {
        sigma_shift: pair_sigma.shift(&Scalar::one()),
        eta: pair_eta.clone(),
        xi,
        xi_symbolic: symbolic_terms(&forms),
        basis_shift: shift.clone(),
    })
}

/// Derives the equation of a functional from its Pearson pair and moments.
pub fn derive_xi(pair: &PearsonPair, moments: &MomentTable) -> Result<StieltjesEquation, EquationError> {
    let shift = moments.basis_shift.clone();
    if pair.start != -shift.clone() {
        return Err(EquationError::BasisMismatch { moments: shift, lattice: pair.start.clone() });
    }
    let forms = xi_forms(&pair.eta, &pair.sigma, &shift)?;
    let needed = forms_moment_span(&forms);
    if moments.len() <= needed {
        return Err(EquationError::InsufficientMoments { needed, available: moments.len() });
    }
    let xi = instantiate_forms(&forms, &moments.moments);
    Ok(StieltjesEquation {
        sigma_shift: pair.sigma_shift(),
        eta: pair.eta.clone(),
        xi,
        xi_symbolic: symbolic_terms(&forms),
        basis_shift: shift,
    })
}

/// Pearson pair, just enough moments, and the derived equation of a spec.
pub fn equation_of(spec: &FunctionalSpec, prec: Precision) -> Result<StieltjesEquation, EquationError> {
    let pair = pearson_pair(spec)?;
    let forms = xi_forms(&pair.eta, &pair.sigma, &spec.shift_scalar())?;
    let nu = moments(spec, forms_moment_span(&forms), prec)?;
    derive_xi(&pair, &nu)
}

impl StieltjesEquation {
    pub fn class(&self) -> usize {
        class_of(&self.eta, &self.sigma())
    }

    /// `σ(t)`.
    pub fn sigma(&self) -> Poly<Scalar> {
        self.sigma_shift.shift(&-Scalar::one())
    }

    /// `ξ` recomputed from the symbolic forms.
    pub fn xi_from_moments(&self, nu: &[Scalar]) -> Poly<Scalar> {
        let width = self.xi_symbolic.iter().map(|t| t.nu_coeffs.len()).max().unwrap_or(0);
        let mut forms = vec![Vec::new(); self.xi_symbolic.iter().map(|t| t.t_power + 1).max().unwrap_or(0)];
        for t in &self.xi_symbolic {
            let mut row = t.nu_coeffs.clone();
            row.resize(width, Scalar::zero());
            forms[t.t_power] = row;
        }
        instantiate_forms(&forms, nu)
    }

    /// `σ(t+1)S(t+1) − η(t)S(t) − ξ(t)`.
    pub fn residual(&self, spec: &FunctionalSpec, t: &Scalar, prec: Precision) -> Result<Scalar, EquationError> {
        let t1 = t.clone() + Scalar::one();
        let s0 = stieltjes_eval(spec, t, prec)?;
        let s1 = stieltjes_eval(spec, &t1, prec)?;
        Ok(self.sigma_shift.eval(t) * s1 - self.eta.eval(t) * s0 - self.xi.eval(t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleResidual {
    pub t: Scalar,
    pub residual: Scalar,
    pub bound: Scalar,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: Vec<SampleResidual>,
    pub pass: bool,
}

/// Sample points past the support, nudged off any mass point.
pub fn default_samples(spec: &FunctionalSpec) -> Vec<Scalar> {
    let base: Vec<Scalar> = match spec.support_end() {
        Some(end) => {
            let e = Scalar::int(end as i64) - spec.shift_scalar();
            [(7, 2), (10, 1), (31, 2)]
                .iter()
                .map(|&(n, d)| e.clone() + Scalar::ratio(n, d))
                .collect()
        }
        None => [(21, 2), (51, 2), (81, 2)].iter().map(|&(n, d)| Scalar::ratio(n, d)).collect(),
    };
    base.into_iter().map(|t| avoid_masses(spec, t)).collect()
}

fn avoid_masses(spec: &FunctionalSpec, mut t: Scalar) -> Scalar {
    let hits = |t: &Scalar| {
        spec.masses
            .iter()
            .any(|m| m.omega == *t || m.omega == t.clone() + Scalar::one())
    };
    while hits(&t) {
        t = t + Scalar::ratio(1, 3);
    }
    t
}

/// Checks the equation at the sample points: passes when every residual is
/// at most `tol·(1 + |ξ(t)|)`.
pub fn verify_equation(
    spec: &FunctionalSpec,
    eq: &StieltjesEquation,
    samples: &[Scalar],
    tol: &Scalar,
    prec: Precision,
) -> Result<VerifyReport, EquationError> {
    let mut out = Vec::new();
    for t in samples {
        let residual = eq.residual(spec, t, prec)?.abs();
        let bound = tol.clone() * (Scalar::one() + eq.xi.eval(t).abs());
        let pass = residual <= bound;
        out.push(SampleResidual { t: t.clone(), residual, bound, pass });
    }
    let pass = out.iter().all(|s| s.pass);
    Ok(VerifyReport { samples: out, pass })
}

/// Lagrange interpolation through the given points.
pub fn interpolate(points: &[(Scalar, Scalar)]) -> Poly<Scalar> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let inv = Scalar::one() / (xi.clone() - xj.clone());
                basis = basis * Poly::linear_root(xj).scale(&inv);
            }
        }
        acc = acc + basis;
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolatedXi {
    pub xi: Poly<Scalar>,
    /// Residual of the fit at one extra sample point.
    pub extra_residual: Scalar,
}

/// Independent oracle: samples `σ(t+1)S(t+1) − η(t)S(t)` at `s + 2`
/// non-lattice points, fits degree `s` and checks the extra point.
pub fn xi_by_interpolation(
    spec: &FunctionalSpec,
    pair: &PearsonPair,
    prec: Precision,
) -> Result<InterpolatedXi, EquationError> {
    let s = pair.class();
    let sigma1 = pair.sigma_shift();
    let offsets = [Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(2, 7), Scalar::ratio(3, 11)];
    let count = s + 2;
    let offset = offsets
        .iter()
        .find(|d| {
            (0..=count).all(|k| {
                let t = pair.start.clone() + Scalar::int(k as i64) + (*d).clone();
                spec.masses.iter().all(|m| m.omega != t)
            })
        })
        .cloned()
        .unwrap_or_else(|| Scalar::ratio(5, 13));
    let ts: Vec<Scalar> = (0..=count)
        .map(|k| pair.start.clone() + Scalar::int(k as i64) + offset.clone())
        .collect();
    let svals = ts
        .iter()
        .map(|t| stieltjes_eval(spec, t, prec))
        .collect::<Result<Vec<_>, _>>()?;
    let values: Vec<(Scalar, Scalar)> = (0..count)
        .map(|k| {
            let t = &ts[k];
            (t.clone(), sigma1.eval(t) * svals[k + 1].clone() - pair.eta.eval(t) * svals[k].clone())
        })
        .collect();
    let xi = interpolate(&values[..=s]);
    let (te, ve) = &values[s + 1];
    let extra_residual = (xi.eval(te) - ve.clone()).abs();
    Ok(InterpolatedXi { xi, extra_residual })
}

/// Extra values some transforms need.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EquationParams {
    /// `ν₀ = L[1]` of the original functional (Christoffel).
    pub nu0: Option<Scalar>,
    /// `ν₀^G = M − S(ω)` (Geronimus).
    pub nu0_g: Option<Scalar>,
}

fn exact_div(p: &Poly<Scalar>, root: &Scalar) -> Poly<Scalar> {
    p.exact_div_linear(root).expect("root of the factor")
}

/// Maps an equation through a transform using closed forms.
///
/// Symmetrization expects the equation of the induced one-sided weight on
/// `0..=2m` and shifts it by `m`.
pub fn transform_equation(
    eq: &StieltjesEquation,
    kind: &TransformKind,
    params: &EquationParams,
) -> Result<StieltjesEquation, EquationError> {
    let one = Scalar::one();
    let sigma = eq.sigma();
    let t_minus = |r: &Scalar| Poly::linear_root(r);
    let (eta, sigma1, xi, shift) = match kind {
        TransformKind::Uvarov { omega, mass } => {
            if mass.is_zero() {
                return Ok(eq.clone());
            }
            // the factor P(t) multiplies η(t) and σ(t+1), chosen as for the weight
            let mut p = Poly::one();
            if !eq.eta.eval(omega).is_zero() {
                p = p * t_minus(omega);
            }
            let sigma_p = sigma.clone() * p.shift(&-one.clone());
            if !sigma_p.eval(omega).is_zero() {
                p = p * t_minus(&(omega.clone() - one.clone()));
            }
            let eta_u = eq.eta.clone() * p.clone();
            let sigma1_u = eq.sigma_shift.clone() * p.clone();
            let jump = exact_div(&sigma1_u, &(omega.clone() - one.clone())) - exact_div(&eta_u, omega);
            let xi = p * eq.xi.clone() + jump.scale(mass);
            (eta_u, sigma1_u, xi, eq.basis_shift.clone())
        }
        TransformKind::Christoffel { omega } => {
            let nu0 = params.nu0.clone().ok_or(EquationError::MissingParameter("nu0"))?;
            let w0 = t_minus(omega);
            let w1 = t_minus(&(omega.clone() - one.clone()));
            let mut sigma1 = eq.sigma_shift.clone() * w0.clone();
            let mut eta = eq.eta.clone() * w1.clone();
            let mut xi = w0.clone() * w1.clone() * eq.xi.clone()
                - (w0.clone() * eq.sigma_shift.clone() - w1.clone() * eq.eta.clone()).scale(&nu0);
            // a root of η or σ at ω absorbs one factor, as in the weight
            for (root, hit) in [
                (omega.clone(), eq.eta.eval(omega).is_zero()),
                (omega.clone() - one.clone(), sigma.eval(omega).is_zero()),
            ] {
                if hit {
                    sigma1 = exact_div(&sigma1, &root);
                    eta = exact_div(&eta, &root);
                    xi = exact_div(&xi, &root);
                }
            }
            (eta, sigma1, xi, eq.basis_shift.clone())
        }
        TransformKind::Geronimus { omega, .. } => {
            let g = params.nu0_g.clone().ok_or(EquationError::MissingParameter("nu0_g"))?;
            let eta = eq.eta.clone() * t_minus(omega);
            let sigma1 = eq.sigma_shift.clone() * t_minus(&(omega.clone() - one.clone()));
            let xi = eq.xi.clone() + (eq.sigma_shift.clone() - eq.eta.clone()).scale(&g);
            (eta, sigma1, xi, eq.basis_shift.clone())
        }
        TransformKind::Symmetrize { m } => {
            let ms = Scalar::int(*m as i64);
            (
                eq.eta.shift(&ms),
                eq.sigma_shift.shift(&ms),
                eq.xi.shift(&ms),
                eq.basis_shift.clone() + ms,
            )
        }
        TransformKind::Truncate { .. } => return Err(EquationError::NoRule("truncation")),
    };
    let sigma_new = sigma1.shift(&-one);
    build(&eta, &sigma_new, &shift, xi)
}
