//! Generalized hypergeometric series `pFq(a; b; z) = Σ (a)_k/(b)_k z^k/k!`.
//!
//! Parameters follow the usual `pFq` convention: the denominator list enters
//! as `(b_j)_k` directly.

use crate::exact::{pochhammer_multi, Precision, Ring, Scalar};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Hard cap on the number of summed terms.
pub const TERM_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperSeries {
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub z: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvergenceClass {
    Entire,
    /// Radius one; `gamma = Σb − Σa` governs behaviour on the circle.
    UnitDisk { gamma: Scalar },
    Terminating { degree: usize },
    Divergent,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperError {
    #[error("divergent series: {0}")]
    DivergentSeries(String),
    #[error("denominator parameter vanishes at term {index}")]
    PoleInDenominator { index: usize },
    #[error("series did not reach tolerance within {terms} terms")]
    NotConverged { terms: usize },
}

impl HyperSeries {
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>, z: Scalar) -> Self {
        HyperSeries { a, b, z }
    }

    /// Index of the last nonzero term when some numerator parameter is a
    /// non-positive integer (or `z = 0`).
    pub fn termination_degree(&self) -> Option<usize> {
        if self.z.is_zero() {
            return Some(0);
        }
        self.a
            .iter()
            .filter(|x| x.is_nonpositive_integer())
            .filter_map(|x| x.as_i64().or_else(|| Some(x.to_f64().round() as i64)))
            .map(|n| (-n) as usize)
            .min()
    }

    /// First term index at which a denominator parameter vanishes before the
    /// series has terminated.
    pub fn pole_index(&self) -> Option<usize> {
        let limit = self.termination_degree();
        self.b
            .iter()
            .filter(|x| x.is_nonpositive_integer())
            .map(|x| (-x.to_f64().round()) as usize)
            .filter(|&k| limit.is_none_or(|d| k < d))
            .min()
            .map(|k| k + 1)
    }

    /// Ratio `t_{k+1}/t_k` of consecutive terms.
    fn term_ratio(&self, k: usize) -> Scalar {
        let kk = Scalar::int(k as i64);
        let num = self
            .a
            .iter()
            .fold(self.z.clone(), |acc, x| acc * (x.clone() + kk.clone()));
        let den = self
            .b
            .iter()
            .fold(Scalar::int(k as i64 + 1), |acc, x| acc * (x.clone() + kk.clone()));
        num / den
    }

    /// The `k`-th term computed directly.
    pub fn term(&self, k: usize) -> Scalar {
        let fact = (1..=k as i64).fold(Scalar::one(), |acc, j| acc * Scalar::int(j));
        pochhammer_multi(&self.a, k) * self.z.pow(k as u32) / (pochhammer_multi(&self.b, k) * fact)
    }
}

pub fn classify_convergence(h: &HyperSeries) -> ConvergenceClass {
    if let Some(degree) = h.termination_degree() {
        return ConvergenceClass::Terminating { degree };
    }
    let (p, q) = (h.a.len(), h.b.len());
    match p.cmp(&(q + 1)) {
        Ordering::Less => ConvergenceClass::Entire,
        Ordering::Equal => {
            let gamma = h.b.iter().cloned().fold(Scalar::zero(), |s, x| s + x)
                - h.a.iter().cloned().fold(Scalar::zero(), |s, x| s + x);
            ConvergenceClass::UnitDisk { gamma }
        }
        Ordering::Greater => ConvergenceClass::Divergent,
    }
}

/// Partial sum `Σ_{k=0}^{n} t_k`, exact when every input is exact.
pub fn eval_hyper_finite_sum(h: &HyperSeries, n: usize) -> Result<Scalar, HyperError> {
    if let Some(index) = h.pole_index() {
        if index <= n {
            return Err(HyperError::PoleInDenominator { index });
        }
    }
    let mut term = Scalar::one();
    let mut sum = Scalar::one();
    for k in 0..n {
        term = term * h.term_ratio(k);
        if term.is_zero() {
            break;
        }
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Value of the series. Terminating series are summed exactly when the
/// inputs are exact; otherwise terms are accumulated at `prec` until the
/// remaining tail is below `tol` relative to the running sum.
pub fn eval_hyper(h: &HyperSeries, tol: &Scalar, prec: Precision) -> Result<Scalar, HyperError> {
    if let Some(index) = h.pole_index() {
        return Err(HyperError::PoleInDenominator { index });
    }
    match classify_convergence(h) {
        ConvergenceClass::Terminating { degree } => eval_hyper_finite_sum(h, degree),
        ConvergenceClass::Divergent => Err(HyperError::DivergentSeries(
            "more numerator than denominator parameters plus one".into(),
        )),
        ConvergenceClass::Entire => sum_until_small(h, tol, prec),
        ConvergenceClass::UnitDisk { gamma } => {
            let r = h.z.abs();
            match r.partial_cmp(&Scalar::one()) {
                Some(Ordering::Less) => sum_until_small(h, tol, prec),
                Some(Ordering::Equal) => {
                    let ok = if h.z == Scalar::one() {
                        gamma.signum() > 0
                    } else {
                        gamma > Scalar::int(-1)
                    };
                    if ok {
                        sum_until_small(h, tol, prec)
                    } else {
                        Err(HyperError::DivergentSeries(format!(
                            "|z| = 1 with parameter excess {gamma}"
                        )))
                    }
                }
                _ => Err(HyperError::DivergentSeries(format!("|z| = {} > 1", r.to_f64()))),
            }
        }
    }
}

fn sum_until_small(h: &HyperSeries, tol: &Scalar, prec: Precision) -> Result<Scalar, HyperError> {
    let approx = HyperSeries {
        a: h.a.iter().map(|x| x.to_approx(prec)).collect(),
        b: h.b.iter().map(|x| x.to_approx(prec)).collect(),
        z: h.z.to_approx(prec),
    };
    let half = Scalar::ratio(1, 2);
    let mut term = Scalar::one().to_approx(prec);
    let mut sum = term.clone();
    let mut small_run = 0;
    for k in 0..TERM_CAP {
        let ratio = approx.term_ratio(k);
        term = term * ratio.clone();
        sum = sum.clone() + term.clone();
        if term.is_zero() {
            return Ok(sum);
        }
        let r = ratio.abs();
        let bound = if r < half {
            // geometric tail bound once the terms decay
            (term.abs() * r.clone() / (Scalar::one() - r)).max_with(&term.abs())
        } else {
            term.abs() * Scalar::int(k as i64 + 2)
        };
        let scale = sum.abs().max_with(&Precision::digits(prec.digits * 2).epsilon());
        if bound <= tol.clone() * scale {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(HyperError::NotConverged { terms: TERM_CAP })
}

/// The finite sum `Σ_{k=0}^{n} t_k` rewritten by reversing the order of
/// summation, as `t_n · (q+2)F(p)(-n, 1, 1-n-b; 1-n-a; (-1)^{p+q+1}/z)`.
pub fn partial_sum_reversed(h: &HyperSeries, n: usize) -> Result<Scalar, HyperError> {
    let lead = h.term(n);
    let nn = Scalar::int(n as i64);
    let one = Scalar::one();
    let mut top = vec![-nn.clone(), one.clone()];
    top.extend(h.b.iter().map(|b| one.clone() - nn.clone() - b.clone()));
    let bottom: Vec<Scalar> = h.a.iter().map(|a| one.clone() - nn.clone() - a.clone()).collect();
    let sign = if (h.a.len() + h.b.len() + 1).is_multiple_of(2) { 1 } else { -1 };
    let z = Scalar::int(sign)
        .checked_div(&h.z)
        .ok_or_else(|| HyperError::DivergentSeries("z = 0 in reversed sum".into()))?;
    let rev = HyperSeries::new(top, bottom, z);
    Ok(lead * eval_hyper_finite_sum(&rev, n)?)
}
