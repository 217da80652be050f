//! Sparse multivariate polynomials with rational coefficients over named
//! parameters. Used to carry family parameters symbolically so that derived
//! equations can be compared with tabulated ones as identities.

use super::poly::Poly;
use super::ring::Ring;
use super::scalar::Scalar;
use rug::{Integer, Rational};
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Product of variables with positive exponents, sorted by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    fn without(&self, var: &str) -> Self {
        Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(other.0.iter()) {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rational::from(1));
        MPoly { terms }
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if q != 0 {
            terms.insert(Monomial::default(), q);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if *q == 0 {
            return MPoly::default();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), Rational::from(c * q))).collect() }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    /// Substitutes polynomials for variables; unmapped variables stay.
    pub fn subst(&self, map: &BTreeMap<String, MPoly>) -> MPoly {
        let mut out = MPoly::default();
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (v, e) in &m.0 {
                let base = map.get(v).cloned().unwrap_or_else(|| MPoly::var(v));
                term = term * base.pow(*e);
            }
            out = out + term;
        }
        out
    }

    /// Numeric value given values for every variable.
    pub fn eval(&self, values: &BTreeMap<String, Scalar>) -> Result<Scalar, String> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = Scalar::Exact(c.clone());
            for (v, e) in &m.0 {
                let x = values.get(v).ok_or_else(|| v.clone())?;
                term = term * x.pow(*e);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Views the polynomial as univariate in `var` with symbolic coefficients.
    pub fn as_poly_in(&self, var: &str) -> Poly<MPoly> {
        let mut coeffs: Vec<MPoly> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, MPoly::default());
            }
            coeffs[e].add_term(m.without(var), c.clone());
        }
        Poly::new(coeffs)
    }

    /// Inverse of [`MPoly::as_poly_in`].
    pub fn from_poly_in(p: &Poly<MPoly>, var: &str) -> MPoly {
        let x = MPoly::var(var);
        p.coeffs()
            .iter()
            .enumerate()
            .fold(MPoly::default(), |acc, (k, c)| acc + c.clone() * x.pow(k as u32))
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn one() -> Self {
        MPoly::constant(Rational::from(1))
    }
    fn from_big(n: &Integer) -> Self {
        MPoly::constant(Rational::from(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in items.iter().enumerate() {
            let neg = c.cmp0() == Ordering::Less;
            let mag = Rational::from(c.abs_ref());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}
