//! Discrete linear functionals built from a hypergeometric weight
//!
//! `ϱ(x) = c · (a)_x / (b+1)_x · z^x / x!`, `x = 0, 1, 2, ...`
//!
//! optionally truncated to `0..=N`, re-centred on a symmetric lattice, and
//! augmented by point masses. The functional acts on polynomials `r` as
//! `L[r] = Σ_x r(x - shift) ϱ(x) + Σ_k M_k r(ω_k)`.

use crate::exact::{falling_factorial, pochhammer, Poly, Precision, Ring, Scalar};
use crate::hyper::{eval_hyper, eval_hyper_finite_sum, HyperError, HyperSeries};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    #[default]
    Infinite,
    Truncated {
        #[serde(rename = "N")]
        n: u64,
    },
    /// The weight lives on `0..=2m` and is read in the variable `x - m`.
    SymmetrizedShift { m: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mass {
    pub omega: Scalar,
    #[serde(rename = "M")]
    pub mass: Scalar,
}

fn one() -> Scalar {
    Scalar::one()
}

fn is_one(s: &Scalar) -> bool {
    s.is_one()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub z: Scalar,
    #[serde(default)]
    pub support: Support,
    #[serde(default)]
    pub masses: Vec<Mass>,
    /// Constant factor in front of the weight.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: Scalar,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FunctionalError {
    #[error("point {x} lies outside the support")]
    OutOfSupport { x: u64 },
    #[error("truncation at N = {n} where η(N) = 0 leaves the weight unchanged")]
    TruncationAtEtaRoot { n: u64 },
    #[error("Stieltjes transform has a pole at t = {t}")]
    PoleAtSupportPoint { t: Scalar },
    #[error("weight denominator (b+1)_x vanishes at x = {x}")]
    PoleInWeight { x: u64 },
    #[error("invalid functional: {0}")]
    Invalid(String),
    #[error(transparent)]
    Hyper(#[from] HyperError),
}

/// `η(x)` and `σ(x)` with `ϱ(x+1)/ϱ(x) = η(x)/σ(x+1)`, written in the
/// physical variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonPair {
    pub eta: Poly<Scalar>,
    pub sigma: Poly<Scalar>,
    /// Leftmost support point; `σ` vanishes there.
    pub start: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    /// Moments are `L[φ_n(x + basis_shift)]`.
    pub basis_shift: Scalar,
    pub moments: Vec<Scalar>,
}

impl MomentTable {
    pub fn new(basis_shift: Scalar, moments: Vec<Scalar>) -> Self {
        MomentTable { basis_shift, moments }
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&Scalar> {
        self.moments.get(n)
    }

    pub fn exactness(&self) -> Vec<bool> {
        self.moments.iter().map(Scalar::is_exact).collect()
    }

    pub fn all_exact(&self) -> bool {
        self.moments.iter().all(Scalar::is_exact)
    }
}

/// Class of a Pearson pair: `max(deg σ − 2, deg(σ − η) − 1)`, floored at 0.
pub fn class_of<R: Ring>(eta: &Poly<R>, sigma: &Poly<R>) -> usize {
    let ds = sigma.degree().map_or(-1, |d| d as i64);
    let dd = (sigma.clone() - eta.clone()).degree().map_or(-1, |d| d as i64);
    (ds - 2).max(dd - 1).max(0) as usize
}

/// Raw pair `η(x) = z Π(x + a_i)`, `σ(x) = x Π(x + b_j)` with no cancellation.
pub fn hypergeometric_pair<R: Ring>(a: &[R], b: &[R], z: &R) -> (Poly<R>, Poly<R>) {
    let neg = |v: &[R]| v.iter().map(|x| -x.clone()).collect::<Vec<_>>();
    let eta = Poly::from_roots(z.clone(), &neg(a));
    let mut sroots = vec![R::zero()];
    sroots.extend(neg(b));
    let sigma = Poly::from_roots(R::one(), &sroots);
    (eta, sigma)
}

/// Cancels `a_i = b_j + 1` pairs. `terminating` marks numerator parameters
/// that end the support and therefore must stay.
pub fn reduce_parameters<R: Ring>(a: &[R], b: &[R], terminating: impl Fn(&R) -> bool) -> (Vec<R>, Vec<R>) {
    let mut a = a.to_vec();
    let mut kept = Vec::new();
    for bj in b {
        let c = bj.clone() + R::one();
        match a.iter().position(|ai| *ai == c && !terminating(ai)) {
            Some(i) => {
                a.remove(i);
            }
            None => kept.push(bj.clone()),
        }
    }
    (a, kept)
}

/// Pearson pair over any ring from already reduced parameters.
///
/// `truncation` is the index `N` of a truncation that is not vacuous and
/// `mass_points` are mass locations in index coordinates. The result is in
/// the physical variable, i.e. shifted by `shift`.
pub fn pair_from_parts<R: Ring>(
    a: &[R],
    b: &[R],
    z: &R,
    truncation: Option<&R>,
    mass_points: &[R],
    shift: &R,
) -> (Poly<R>, Poly<R>) {
    let (mut eta, mut sigma) = hypergeometric_pair(a, b, z);
    let one = R::one();
    let mul_both = |eta: &mut Poly<R>, sigma: &mut Poly<R>, root: &R| {
        // factor (x - root) on η(x) and on σ(x+1), i.e. (x - 1 - root) on σ(x)
        *eta = eta.clone() * Poly::linear_root(root);
        *sigma = sigma.clone() * Poly::linear_root(&(root.clone() + one.clone()));
    };
    if let Some(n) = truncation {
        mul_both(&mut eta, &mut sigma, n);
    }
    for w in mass_points {
        if !eta.eval(w).is_zero() {
            mul_both(&mut eta, &mut sigma, w);
        }
        if !sigma.eval(w).is_zero() {
            mul_both(&mut eta, &mut sigma, &(w.clone() - one.clone()));
        }
    }
    (eta.shift(shift), sigma.shift(shift))
}

fn scalar_cmp(x: &Scalar, y: &Scalar) -> Ordering {
    x.partial_cmp(y).unwrap_or(Ordering::Equal)
}

impl FunctionalSpec {
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>, z: Scalar) -> Self {
        FunctionalSpec {
            a,
            b,
            z,
            support: Support::Infinite,
            masses: Vec::new(),
            scale: Scalar::one(),
        }
    }

    pub fn with_support(mut self, support: Support) -> Self {
        self.support = support;
        self
    }

    pub fn with_mass(mut self, omega: Scalar, mass: Scalar) -> Self {
        self.masses.push(Mass { omega, mass });
        self
    }

    pub fn from_json(text: &str) -> Result<Self, FunctionalError> {
        let spec: FunctionalSpec =
            serde_json::from_str(text).map_err(|e| FunctionalError::Invalid(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Offset between the summation index and the physical variable.
    pub fn shift(&self) -> u64 {
        match self.support {
            Support::SymmetrizedShift { m } => m,
            _ => 0,
        }
    }

    pub fn shift_scalar(&self) -> Scalar {
        Scalar::int(self.shift() as i64)
    }

    pub fn validate(&self) -> Result<(), FunctionalError> {
        if self.z.is_zero() {
            return Err(FunctionalError::Invalid("z must be nonzero".into()));
        }
        if self.scale.is_zero() {
            return Err(FunctionalError::Invalid("weight scale must be nonzero".into()));
        }
        for (i, m) in self.masses.iter().enumerate() {
            if self.masses[..i].iter().any(|o| o.omega == m.omega) {
                return Err(FunctionalError::Invalid(format!("repeated mass point {}", m.omega)));
            }
        }
        if let Some(x) = self.weight_pole() {
            return Err(FunctionalError::PoleInWeight { x });
        }
        Ok(())
    }

    /// First index where `(b+1)_x` vanishes while the numerator does not.
    fn weight_pole(&self) -> Option<u64> {
        let end = self.natural_end();
        let limit = match self.support {
            Support::Truncated { n } => Some(end.map_or(n, |e| e.min(n))),
            _ => end,
        };
        self.b
            .iter()
            .map(|b| b.clone() + Scalar::one())
            .filter(|c| c.is_nonpositive_integer())
            .map(|c| (-c.to_f64().round()) as u64 + 1)
            .filter(|&x| limit.is_none_or(|l| x <= l))
            .min()
    }

    /// Last index with nonzero weight forced by a numerator parameter.
    pub fn natural_end(&self) -> Option<u64> {
        self.a
            .iter()
            .filter(|x| x.is_nonpositive_integer())
            .map(|x| (-x.to_f64().round()) as u64)
            .min()
    }

    /// Last index of the support, `None` when infinite.
    pub fn support_end(&self) -> Option<u64> {
        let nat = self.natural_end();
        match self.support {
            Support::Truncated { n } => Some(nat.map_or(n, |e| e.min(n))),
            Support::SymmetrizedShift { m } => Some(nat.map_or(2 * m, |e| e.min(2 * m))),
            Support::Infinite => nat,
        }
    }

    /// Weight parameters after cancelling `(a_i)_x / (b_j + 1)_x = 1` pairs.
    pub fn reduced_parameters(&self) -> (Vec<Scalar>, Vec<Scalar>) {
        reduce_parameters(&self.a, &self.b, Scalar::is_nonpositive_integer)
    }

    /// Canonical form: reduced and sorted parameters, merged nonzero masses.
    pub fn canonical(&self) -> FunctionalSpec {
        let (mut a, mut b) = self.reduced_parameters();
        a.sort_by(scalar_cmp);
        b.sort_by(scalar_cmp);
        let mut masses: Vec<Mass> = Vec::new();
        for m in &self.masses {
            match masses.iter_mut().find(|o| o.omega == m.omega) {
                Some(o) => o.mass = o.mass.clone() + m.mass.clone(),
                None => masses.push(m.clone()),
            }
        }
        masses.retain(|m| !m.mass.is_zero());
        masses.sort_by(|x, y| scalar_cmp(&x.omega, &y.omega));
        FunctionalSpec {
            a,
            b,
            z: self.z.clone(),
            support: self.support.clone(),
            masses,
            scale: self.scale.clone(),
        }
    }

    /// Ratio `ϱ(x+1)/ϱ(x)` numerator and denominator at index `x`.
    fn step(&self, x: u64) -> (Scalar, Scalar) {
        let xs = Scalar::int(x as i64);
        let num = self.a.iter().fold(self.z.clone(), |acc, ai| acc * (xs.clone() + ai.clone()));
        let den = self
            .b
            .iter()
            .fold(xs.clone() + Scalar::one(), |acc, bj| acc * (xs.clone() + Scalar::one() + bj.clone()));
        (num, den)
    }

    /// Iterates `(x, ϱ(x))` over a finite support.
    fn finite_weights(&self, end: u64) -> Result<Vec<Scalar>, FunctionalError> {
        let mut out = Vec::with_capacity(end as usize + 1);
        let mut w = self.scale.clone();
        for x in 0..=end {
            out.push(w.clone());
            if x == end {
                break;
            }
            let (num, den) = self.step(x);
            if num.is_zero() {
                out.resize(end as usize + 1, Scalar::zero());
                break;
            }
            if den.is_zero() {
                return Err(FunctionalError::PoleInWeight { x: x + 1 });
            }
            w = w * num / den;
        }
        Ok(out)
    }
}

/// `ϱ(x)` at summation index `x` (physical point `x - shift`).
pub fn weight_at(spec: &FunctionalSpec, x: u64) -> Result<Scalar, FunctionalError> {
    if let Some(end) = match spec.support {
        Support::Truncated { n } => Some(n),
        Support::SymmetrizedShift { m } => Some(2 * m),
        Support::Infinite => None,
    } {
        if x > end {
            return Err(FunctionalError::OutOfSupport { x });
        }
    }
    let weights = spec.finite_weights(x)?;
    Ok(weights[x as usize].clone())
}

/// Weights `ϱ(0), ..., ϱ(count − 1)` by the ratio recursion; indices past
/// the end of the support get weight zero. Masses are not included.
pub fn weights(spec: &FunctionalSpec, count: usize) -> Result<Vec<Scalar>, FunctionalError> {
    spec.validate()?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = count as u64 - 1;
    let end = spec.support_end().map_or(last, |e| e.min(last));
    let mut out = spec.finite_weights(end)?;
    out.resize(count, Scalar::zero());
    Ok(out)
}

/// Pearson pair of the functional in the physical variable.
///
/// The weight parameters are reduced first. A truncation at `N` multiplies
/// both sides of the ratio by `x − N`. Each mass at `ω` needs `η(ω) = 0` and
/// `σ(ω) = 0`; missing roots are supplied by multiplying both sides of the
/// ratio by `x − ω` and `x + 1 − ω` respectively. Zero masses are ignored.
pub fn pearson_pair(spec: &FunctionalSpec) -> Result<PearsonPair, FunctionalError> {
    spec.validate()?;
    let (a, b) = spec.reduced_parameters();
    let mut truncation = None;
    if let Support::Truncated { n } = spec.support {
        let ns = Scalar::int(n as i64);
        let (eta, _) = hypergeometric_pair(&a, &b, &spec.z);
        if eta.eval(&ns).is_zero() {
            return Err(FunctionalError::TruncationAtEtaRoot { n });
        }
        // a weight that already stops before N is left alone
        if spec.natural_end().is_none_or(|end| end > n) {
            truncation = Some(ns);
        }
    }
    let shift = spec.shift_scalar();
    let points: Vec<Scalar> = spec
        .masses
        .iter()
        .filter(|m| !m.mass.is_zero())
        .map(|m| m.omega.clone() + shift.clone())
        .collect();
    let (eta, sigma) = pair_from_parts(&a, &b, &spec.z, truncation.as_ref(), &points, &shift);
    Ok(PearsonPair { eta, sigma, start: -shift })
}

impl PearsonPair {
    /// `σ(x + 1)`.
    pub fn sigma_shift(&self) -> Poly<Scalar> {
        self.sigma.shift(&Scalar::one())
    }

    pub fn class(&self) -> usize {
        class_of(&self.eta, &self.sigma)
    }
}

pub fn classify_class(spec: &FunctionalSpec) -> Result<usize, FunctionalError> {
    Ok(pearson_pair(spec)?.class())
}

/// Class of a plain `pFq` weight from its parameter counts alone:
/// `p − 1` when `p > q + 1`, `q` when `p < q + 1`, and for `p = q + 1`
/// either `q` (`z ≠ 1`) or `q − 1` (`z = 1`). Assumes the pair is coprime.
pub fn class_from_counts(p: usize, q: usize, z: &Scalar) -> usize {
    match p.cmp(&(q + 1)) {
        Ordering::Greater => p - 1,
        Ordering::Less => q,
        Ordering::Equal if z.is_one() => q.saturating_sub(1),
        Ordering::Equal => q,
    }
}

impl PearsonPair {
    /// Degree of `gcd(η, σ)`, or `None` when the coefficients are not exact.
    ///
    /// Mass factors are kept on purpose, so a full Uvarov pair shares the
    /// root `ω`; this is reported, not cancelled.
    pub fn common_factor_degree(&self) -> Option<usize> {
        let exact = |p: &Poly<Scalar>| p.coeffs().iter().all(Scalar::is_exact);
        if !exact(&self.eta) || !exact(&self.sigma) {
            return None;
        }
        Some(poly_gcd(self.eta.clone(), self.sigma.clone()).degree().unwrap_or(0))
    }

    pub fn is_coprime(&self) -> Option<bool> {
        self.common_factor_degree().map(|d| d == 0)
    }
}

fn poly_rem(mut a: Poly<Scalar>, b: &Poly<Scalar>) -> Poly<Scalar> {
    let (Some(db), Some(lb)) = (b.degree(), b.leading()) else { return a };
    while let Some(da) = a.degree() {
        if da < db {
            break;
        }
        let c = a.leading().cloned().unwrap_or_else(Scalar::zero) / lb.clone();
        a = a - Poly::monomial(c, da - db) * b.clone();
    }
    a
}

fn poly_gcd(mut a: Poly<Scalar>, mut b: Poly<Scalar>) -> Poly<Scalar> {
    while b.degree().is_some() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    a
}

/// Series tolerance used for moments and Stieltjes values at `prec`.
pub fn series_tolerance(prec: Precision) -> Scalar {
    Precision::digits(prec.digits + 5).epsilon()
}

/// Moments `ν_n = L[φ_n(x + shift)]` for `n = 0..=k`.
pub fn moments(spec: &FunctionalSpec, k: usize, prec: Precision) -> Result<MomentTable, FunctionalError> {
    spec.validate()?;
    let tol = series_tolerance(prec);
    let shift = spec.shift_scalar();
    let mut out = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut value = weight_moment(spec, n, &tol, prec)?;
        for m in &spec.masses {
            value = value + m.mass.clone() * falling_factorial(&(m.omega.clone() + shift.clone()), n);
        }
        out.push(value);
    }
    Ok(MomentTable::new(shift, out))
}

fn weight_moment(
    spec: &FunctionalSpec,
    n: usize,
    tol: &Scalar,
    prec: Precision,
) -> Result<Scalar, FunctionalError> {
    let one = Scalar::one();
    let bp: Vec<Scalar> = spec.b.iter().map(|b| b.clone() + one.clone()).collect();
    let num = spec.a.iter().fold(Scalar::one(), |acc, a| acc * pochhammer(a, n));
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    let den = bp.iter().fold(Scalar::one(), |acc, c| acc * pochhammer(c, n));
    if den.is_zero() {
        return Err(FunctionalError::PoleInWeight { x: n as u64 });
    }
    let prefactor = spec.scale.clone() * spec.z.pow(n as u32) * num / den;
    let nn = Scalar::int(n as i64);
    let h = HyperSeries::new(
        spec.a.iter().map(|a| a.clone() + nn.clone()).collect(),
        bp.iter().map(|c| c.clone() + nn.clone()).collect(),
        spec.z.clone(),
    );
    let series = match spec.support {
        Support::Truncated { n: big_n } => {
            if n as u64 > big_n {
                return Ok(Scalar::zero());
            }
            eval_hyper_finite_sum(&h, (big_n - n as u64) as usize)?
        }
        _ => eval_hyper(&h, tol, prec)?,
    };
    Ok(prefactor * series)
}

/// `S(t) = L[1/(t − x)]`.
pub fn stieltjes_eval(spec: &FunctionalSpec, t: &Scalar, prec: Precision) -> Result<Scalar, FunctionalError> {
    spec.validate()?;
    let pole = || FunctionalError::PoleAtSupportPoint { t: t.clone() };
    let c = t.clone() + spec.shift_scalar();
    let end = spec.support_end();
    if c.is_natural() && end.is_none_or(|e| c.to_f64().round() as u64 <= e) {
        return Err(pole());
    }
    let mut total = match end {
        Some(e) => {
            let weights = spec.finite_weights(e)?;
            weights
                .iter()
                .enumerate()
                .fold(Scalar::zero(), |acc, (x, w)| acc + w.clone() / (c.clone() - Scalar::int(x as i64)))
        }
        None => {
            // Σ ϱ(x)/(c − x) = (1/c) Σ ϱ(x) (−c)_x/(1−c)_x
            let one = Scalar::one();
            let mut a = spec.a.clone();
            a.push(-c.clone());
            let mut b: Vec<Scalar> = spec.b.iter().map(|b| b.clone() + one.clone()).collect();
            b.push(one.clone() - c.clone());
            let h = HyperSeries::new(a, b, spec.z.clone());
            spec.scale.clone() * eval_hyper(&h, &series_tolerance(prec), prec)? / c.clone()
        }
    };
    for m in &spec.masses {
        let d = t.clone() - m.omega.clone();
        if d.is_zero() {
            return Err(pole());
        }
        total = total + m.mass.clone() / d;
    }
    Ok(total)
}
