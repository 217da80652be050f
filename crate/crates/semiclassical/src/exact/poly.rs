//! Dense univariate polynomials over a [`Ring`], with coefficients stored in
//! ascending order. A bivariate polynomial is a `Poly<Poly<R>>`.

use super::combinat::{stirling_convert, BasisChange};
use super::ring::Ring;
use rug::Integer;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

/// Polynomial in `t` whose coefficients are polynomials in `x`.
pub type BiPoly<R> = Poly<Poly<R>>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![R::zero(), R::one()])
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `x - r`.
    pub fn linear_root(r: &R) -> Self {
        Poly::new(vec![-r.clone(), R::one()])
    }

    /// `lead * Π (x - r_i)`.
    pub fn from_roots(lead: R, roots: &[R]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(lead), |acc, r| acc * Poly::linear_root(r))
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &R) -> Self {
        let step = Poly::new(vec![c.clone(), R::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, a| acc * step.clone() + Poly::constant(a.clone()))
    }

    /// Synthetic division by `x - r`: returns quotient and remainder `p(r)`.
    pub fn div_linear(&self, r: &R) -> (Self, R) {
        if self.coeffs.is_empty() {
            return (Poly::zero(), R::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![R::zero(); n - 1];
        let mut carry = R::zero();
        for k in (0..n).rev() {
            let v = self.coeffs[k].clone() + carry.clone() * r.clone();
            if k == 0 {
                return (Poly::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Exact quotient by `x - r`, or `None` when `r` is not a root.
    pub fn exact_div_linear(&self, r: &R) -> Option<Self> {
        let (q, rem) = self.div_linear(r);
        rem.is_zero().then_some(q)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Coefficients in the falling-factorial basis `φ_n(x)`.
    pub fn to_falling(&self) -> Vec<R> {
        stirling_convert(&self.coeffs, BasisChange::PowerToFalling)
    }

    /// Polynomial `Σ c_n φ_n(x)`.
    pub fn from_falling(c: &[R]) -> Self {
        Poly::new(stirling_convert(c, BasisChange::FallingToPower))
    }

    /// Renders with the given variable name using the coefficient `Debug`-free
    /// display supplied by `fmt_coeff`.
    pub fn render(&self, var: &str, fmt_coeff: impl Fn(&R) -> String) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = fmt_coeff(c);
            let term = match k {
                0 => cs,
                _ => {
                    let mono = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if c.is_one() {
                        mono
                    } else {
                        format!("({cs})*{mono}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<R: Ring> Poly<Poly<R>> {
    /// Lifts a polynomial in `t` with constant coefficients.
    pub fn lift_t(p: &Poly<R>) -> Self {
        p.map(|c| Poly::constant(c.clone()))
    }

    /// Lifts a polynomial in `x` as a `t`-constant bivariate polynomial.
    pub fn lift_x(p: &Poly<R>) -> Self {
        Poly::constant(p.clone())
    }

    /// Applies `f` to every `x`-coefficient.
    pub fn map_x(&self, f: impl Fn(&Poly<R>) -> Poly<R>) -> Self {
        self.map(f)
    }

    /// Evaluates the `x`-coefficients at a point, leaving a polynomial in `t`.
    pub fn eval_x(&self, x: &R) -> Poly<R> {
        self.map(|c| c.eval(x))
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", |c| c.to_string()))
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn from_big(n: &Integer) -> Self {
        Poly::constant(R::from_big(n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::Scalar;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn p(c: &[(i64, i64)]) -> Poly<Scalar> {
        Poly::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[(1, 1), (0, 1), (0, 1)]).degree(), Some(0));
        assert_eq!(Poly::<Scalar>::zero().degree(), None);
    }

    #[test]
    fn shift_and_eval() {
        let a = p(&[(1, 1), (2, 1), (3, 1)]);
        let s = a.shift(&q(1, 2));
        for k in -3..4 {
            let x = q(k, 3);
            assert_eq!(s.eval(&x), a.eval(&(x.clone() + q(1, 2))));
        }
    }

    #[test]
    fn synthetic_division() {
        let a = Poly::from_roots(q(2, 1), &[q(1, 1), q(-1, 3), q(5, 2)]);
        let quot = a.exact_div_linear(&q(-1, 3)).unwrap();
        assert_eq!(quot, Poly::from_roots(q(2, 1), &[q(1, 1), q(5, 2)]));
        assert!(a.exact_div_linear(&q(7, 1)).is_none());
        let (_, r) = a.div_linear(&q(7, 1));
        assert_eq!(r, a.eval(&q(7, 1)));
    }

    #[test]
    fn bipoly_division_by_t_minus_x() {
        // (t^2 - x^2) / (t - x) = t + x
        let t2: BiPoly<Scalar> = Poly::monomial(Poly::one(), 2);
        let x2: BiPoly<Scalar> = Poly::lift_x(&Poly::monomial(q(1, 1), 2));
        let num = t2 - x2;
        let quot = num.exact_div_linear(&Poly::x()).unwrap();
        assert_eq!(quot, Poly::new(vec![Poly::x(), Poly::one()]));
    }

    #[test]
    fn falling_basis_round_trip() {
        let a = p(&[(3, 1), (-1, 2), (4, 1), (1, 1)]);
        assert_eq!(Poly::from_falling(&a.to_falling()), a);
    }
}
