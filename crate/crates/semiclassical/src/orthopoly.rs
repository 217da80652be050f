//! Monic orthogonal polynomials and three-term recurrences from moments.
//!
//! The recurrence is `p_{n+1}(x) = (x − α_n) p_n(x) − β_n p_{n−1}(x)` with
//! `p_{-1} = 0`, `p_0 = 1` and the convention `β_0 = L[1]`. Two routes are
//! provided: Hankel determinants of the power moments and the modified
//! Chebyshev algorithm on the falling-factorial moments. Both work in the
//! variable of the moment basis; `α` is then moved to the physical variable.

use crate::exact::{stirling_convert, BasisChange, Poly, Precision, Ring, Scalar};
use crate::functional::{moments, FunctionalError, FunctionalSpec, MomentTable};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Largest degree accepted by default; exact determinants grow quickly.
pub const DEFAULT_MAX_DEGREE: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recurrence {
    pub alpha: Vec<Scalar>,
    pub beta: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrthoError {
    /// No monic orthogonal polynomial of degree `n + 1`: the Hankel
    /// determinant of order `n + 1` vanishes.
    #[error("functional is not quasi-definite at level {n}")]
    SingularHankel { n: usize },
    #[error("{needed} moments needed, {have} available")]
    NotEnoughMoments { needed: usize, have: usize },
    #[error("degree {k} exceeds the cap {cap}")]
    DegreeCap { k: usize, cap: usize },
    #[error("Hankel and modified Chebyshev routes disagree at n = {n}")]
    RouteMismatch { n: usize },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

impl Recurrence {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `p_0, ..., p_n` for `n ≤ len`.
    pub fn polynomials(&self, n: usize) -> Vec<Poly<Scalar>> {
        let n = n.min(self.len());
        let mut out = vec![Poly::constant(Scalar::one())];
        let mut prev = Poly::new(vec![]);
        for k in 0..n {
            let cur = out[k].clone();
            // p_{-1} = 0, so β_0 never enters
            let next = (Poly::x() - Poly::constant(self.alpha[k].clone())) * cur.clone() - prev.scale(&self.beta[k]);
            prev = cur;
            out.push(next);
        }
        out
    }

    fn shifted(mut self, by: &Scalar) -> Self {
        for a in &mut self.alpha {
            *a = a.clone() - by.clone();
        }
        self
    }
}

/// `L[y^k]` for `k < len`, where `y = x + basis_shift`.
pub fn power_moments(nu: &MomentTable) -> Vec<Scalar> {
    let n = nu.len();
    (0..n)
        .map(|k| {
            let mut unit = vec![Scalar::zero(); k + 1];
            unit[k] = Scalar::one();
            let falling = stirling_convert(&unit, BasisChange::PowerToFalling);
            falling.iter().zip(&nu.moments).fold(Scalar::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
        })
        .collect()
}

fn check_size(nu: &MomentTable, k: usize) -> Result<(), OrthoError> {
    if k > DEFAULT_MAX_DEGREE {
        return Err(OrthoError::DegreeCap { k, cap: DEFAULT_MAX_DEGREE });
    }
    if nu.len() < 2 * k {
        return Err(OrthoError::NotEnoughMoments { needed: 2 * k, have: nu.len() });
    }
    Ok(())
}

/// Determinant by Gaussian elimination, largest pivot first.
fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut det = Scalar::one();
    for c in 0..n {
        let pivot = (c..n)
            .filter(|&r| !m[r][c].is_zero())
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap_or(Ordering::Equal));
        let Some(p) = pivot else { return Scalar::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let lead = m[c][c].clone();
        det = det * lead.clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / lead.clone();
            for j in c..n {
                let v = m[r][j].clone() - f.clone() * m[c][j].clone();
                m[r][j] = v;
            }
        }
    }
    det
}

/// `det[m_{i+j}]` of order `n`, and the same with the last column moved up by one.
fn hankel_pair(m: &[Scalar], n: usize) -> (Scalar, Scalar) {
    if n == 0 {
        return (Scalar::one(), Scalar::zero());
    }
    let plain: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| m[i + j].clone()).collect()).collect();
    let mut moved = plain.clone();
    for (i, row) in moved.iter_mut().enumerate() {
        row[n - 1] = m[i + n].clone();
    }
    (determinant(plain), determinant(moved))
}

/// Recurrence coefficients `α_0..α_{k−1}`, `β_0..β_{k−1}` from Hankel
/// determinants: `β_n = Δ_{n+1}Δ_{n−1}/Δ_n²`, `α_n = Δ'_{n+1}/Δ_{n+1} − Δ'_n/Δ_n`.
/// Needs `2k` moments.
pub fn recurrence_hankel(nu: &MomentTable, k: usize) -> Result<Recurrence, OrthoError> {
    check_size(nu, k)?;
    let m = power_moments(nu);
    let dets: Vec<(Scalar, Scalar)> = (0..=k).map(|n| hankel_pair(&m, n)).collect();
    let mut alpha = Vec::with_capacity(k);
    let mut beta = Vec::with_capacity(k);
    for n in 0..k {
        let (d1, p1) = &dets[n + 1];
        let (d0, p0) = &dets[n];
        if d1.is_zero() {
            return Err(OrthoError::SingularHankel { n });
        }
        alpha.push(p1.clone() / d1.clone() - p0.clone() / d0.clone());
        beta.push(if n == 0 { d1.clone() } else { d1.clone() * dets[n - 1].0.clone() / (d0.clone() * d0.clone()) });
    }
    Ok(Recurrence { alpha, beta }.shifted(&nu.basis_shift))
}

/// Modified Chebyshev algorithm with the falling factorials as the auxiliary
/// polynomials: `φ_{l+1}(y) = (y − l) φ_l(y)`, so `a_l = l`, `b_l = 0`.
/// Needs `2k` moments.
pub fn recurrence_modified_chebyshev(nu: &MomentTable, k: usize) -> Result<Recurrence, OrthoError> {
    check_size(nu, k)?;
    if k == 0 {
        return Ok(Recurrence { alpha: vec![], beta: vec![] });
    }
    let a = |l: usize| Scalar::int(l as i64);
    let width = 2 * k;
    let mut older = vec![Scalar::zero(); width];
    let mut prev: Vec<Scalar> = nu.moments[..width].to_vec();
    if prev[0].is_zero() {
        return Err(OrthoError::SingularHankel { n: 0 });
    }
    let mut alpha = vec![a(0) + prev[1].clone() / prev[0].clone()];
    let mut beta = vec![prev[0].clone()];
    for n in 1..k {
        let mut cur = vec![Scalar::zero(); width];
        for l in n..width - n {
            cur[l] = prev[l + 1].clone() - (alpha[n - 1].clone() - a(l)) * prev[l].clone()
                - beta[n - 1].clone() * older[l].clone();
        }
        if cur[n].is_zero() {
            return Err(OrthoError::SingularHankel { n });
        }
        alpha.push(a(n) + cur[n + 1].clone() / cur[n].clone() - prev[n].clone() / prev[n - 1].clone());
        beta.push(cur[n].clone() / prev[n - 1].clone());
        older = prev;
        prev = cur;
    }
    Ok(Recurrence { alpha, beta }.shifted(&nu.basis_shift))
}

/// Hankel route, cross-checked against the modified Chebyshev route when
/// every moment is exact (the two must then agree exactly).
pub fn recurrence_from_moments(nu: &MomentTable, k: usize) -> Result<Recurrence, OrthoError> {
    let rec = recurrence_hankel(nu, k)?;
    if nu.moments.iter().take(2 * k).all(Scalar::is_exact) {
        let other = recurrence_modified_chebyshev(nu, k)?;
        if let Some(n) = (0..k).find(|&n| rec.alpha[n] != other.alpha[n] || rec.beta[n] != other.beta[n]) {
            return Err(OrthoError::RouteMismatch { n });
        }
    }
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    /// `L[p_i p_j]` for `i, j ≤ K`.
    pub gram: Vec<Vec<Scalar>>,
    pub max_off_diagonal: Scalar,
    pub max_diagonal: Scalar,
    pub pass: bool,
}

/// `L` applied to a polynomial in the physical variable.
pub fn apply_functional(p: &Poly<Scalar>, nu: &MomentTable) -> Result<Scalar, OrthoError> {
    let falling = p.shift(&-nu.basis_shift.clone()).to_falling();
    if falling.len() > nu.len() {
        return Err(OrthoError::NotEnoughMoments { needed: falling.len(), have: nu.len() });
    }
    Ok(falling.iter().zip(&nu.moments).fold(Scalar::zero(), |acc, (c, v)| acc + c.clone() * v.clone()))
}

/// Gram matrix of `p_0..p_K` under the functional; passes when every
/// off-diagonal entry is at most `tol · max|diagonal|` and no diagonal entry
/// vanishes.
pub fn orthogonality_check(
    spec: &FunctionalSpec,
    rec: &Recurrence,
    k: usize,
    tol: &Scalar,
    prec: Precision,
) -> Result<OrthogonalityReport, OrthoError> {
    let polys = rec.polynomials(k);
    let nu = moments(spec, 2 * k, prec)?;
    let mut gram = Vec::with_capacity(polys.len());
    for pi in &polys {
        let row = polys
            .iter()
            .map(|pj| apply_functional(&(pi.clone() * pj.clone()), &nu))
            .collect::<Result<Vec<_>, _>>()?;
        gram.push(row);
    }
    let mut max_off = Scalar::zero();
    let mut max_diag = Scalar::zero();
    let mut diag_ok = true;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag_ok &= !v.is_zero();
                max_diag = max_diag.max_with(&v.abs());
            } else {
                max_off = max_off.max_with(&v.abs());
            }
        }
    }
    let bound = tol.clone() * max_diag.clone();
    let pass = diag_ok && max_off.partial_cmp(&bound) != Some(Ordering::Greater);
    Ok(OrthogonalityReport { gram, max_off_diagonal: max_off, max_diagonal: max_diag, pass })
}
