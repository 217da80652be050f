//! Numbers that are either exact rationals or high-precision binary floats.
//!
//! Arithmetic stays exact while every operand is exact. Once an approximate
//! operand enters, the result is approximate at the smallest precision among
//! the approximate operands.

use super::ring::Ring;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

const GUARD_BITS: u32 = 16;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision expressed in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub digits: u32,
}

impl Precision {
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn digits(digits: u32) -> Self {
        Precision { digits }
    }

    pub fn bits(self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn from_bits(bits: u32) -> Self {
        let d = (bits.saturating_sub(GUARD_BITS) as f64 / LOG2_10).floor();
        Precision { digits: d.max(1.0) as u32 }
    }

    /// `10^(-digits)`, the natural relative accuracy of this precision.
    pub fn epsilon(self) -> Scalar {
        Scalar::Exact(Rational::from((1, Integer::from(10).pow(self.digits))))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Approx(Float),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(Rational::from((n, d)))
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar::Exact(q)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    /// Exact integer value, if this is an exact integer fitting in `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Exact(q) if *q.denom() == 1 => q.numer().to_i64(),
            _ => None,
        }
    }

    /// Precision of an approximate value, `None` when exact.
    pub fn precision(&self) -> Option<Precision> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(f) => Some(Precision::from_bits(f.prec())),
        }
    }

    fn prec_bits(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(f) => Some(f.prec()),
        }
    }

    pub fn to_float(&self, bits: u32) -> Float {
        match self {
            Scalar::Exact(q) => Float::with_val(bits, q),
            Scalar::Approx(f) => Float::with_val(bits, f),
        }
    }

    /// Converts to an approximate value at the given precision.
    pub fn to_approx(&self, prec: Precision) -> Scalar {
        Scalar::Approx(self.to_float(prec.bits()))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Approx(f) => f.to_f64(),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Rational::from(q.abs_ref())),
            Scalar::Approx(f) => Scalar::Approx(Float::with_val(f.prec(), f.abs_ref())),
        }
    }

    pub fn signum(&self) -> i32 {
        let o = match self {
            Scalar::Exact(q) => q.cmp0(),
            Scalar::Approx(f) => f.cmp0().unwrap_or(Ordering::Equal),
        };
        match o {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact integer test; approximate values count when they are integral.
    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(q) => *q.denom() == 1,
            Scalar::Approx(f) => f.is_integer(),
        }
    }

    /// Member of `{0, -1, -2, ...}`.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.is_integer() && self.signum() <= 0
    }

    /// Member of `{0, 1, 2, ...}`.
    pub fn is_natural(&self) -> bool {
        self.is_integer() && self.signum() >= 0
    }

    /// Exact or approximate quotient, `None` on division by an exact or
    /// floating zero.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            return None;
        }
        Some(self.clone() / rhs.clone())
    }

    pub fn recip(&self) -> Option<Scalar> {
        Scalar::one().checked_div(self)
    }

    /// Integer power with a possibly negative exponent.
    pub fn powi(&self, n: i64) -> Option<Scalar> {
        let p = self.pow(n.unsigned_abs() as u32);
        if n >= 0 {
            Some(p)
        } else {
            p.recip()
        }
    }

    /// `e^self` at the given precision.
    pub fn exp(&self, prec: Precision) -> Scalar {
        let bits = self.prec_bits().unwrap_or(prec.bits()).min(prec.bits());
        Scalar::Approx(self.to_float(bits).exp())
    }

    /// `self^e` for a positive base and real exponent.
    pub fn powf(&self, e: &Scalar, prec: Precision) -> Scalar {
        let bits = prec.bits();
        let base = self.to_float(bits);
        let ex = e.to_float(bits);
        Scalar::Approx(base.pow(ex))
    }

    pub fn sqrt(&self, prec: Precision) -> Scalar {
        Scalar::Approx(self.to_float(prec.bits()).sqrt())
    }

    /// `|self - other| <= tol * max(1, |other|)`.
    pub fn close_to(&self, other: &Scalar, tol: &Scalar) -> bool {
        let diff = (self.clone() - other.clone()).abs();
        let scale = other.abs().max_with(&Scalar::one());
        diff.partial_cmp(&(tol.clone() * scale)) != Some(Ordering::Greater)
    }

    pub fn max_with(&self, other: &Scalar) -> Scalar {
        if self.partial_cmp(other) == Some(Ordering::Less) {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Decimal rendering with the given number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let f = match self {
            Scalar::Exact(q) => Float::with_val(Precision::digits(digits as u32).bits(), q),
            Scalar::Approx(f) => f.clone(),
        };
        f.to_string_radix(10, Some(digits))
    }
}

fn combine(a: &Scalar, b: &Scalar) -> Option<u32> {
    match (a.prec_bits(), b.prec_bits()) {
        (None, None) => None,
        (Some(p), None) | (None, Some(p)) => Some(p),
        (Some(p), Some(q)) => Some(p.min(q)),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match combine(&self, &rhs) {
                    None => match (self, rhs) {
                        (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                        _ => unreachable!(),
                    },
                    Some(bits) => {
                        let a = self.to_float(bits);
                        let b = rhs.to_float(bits);
                        Scalar::Approx(Float::with_val_round(bits, &a $op &b, Round::Nearest).0)
                    }
                }
            }
        }

        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.clone() $op rhs.clone()
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        match combine(&self, &rhs) {
            None => match (self, rhs) {
                (Scalar::Exact(a), Scalar::Exact(b)) => {
                    assert!(b != 0, "exact division by zero");
                    Scalar::Exact(a / b)
                }
                _ => unreachable!(),
            },
            Some(bits) => {
                let a = self.to_float(bits);
                let b = rhs.to_float(bits);
                Scalar::Approx(Float::with_val(bits, &a / &b))
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.clone() / rhs.clone()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Approx(f) => Scalar::Approx(-f),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a == b,
            (Scalar::Exact(q), Scalar::Approx(f)) | (Scalar::Approx(f), Scalar::Exact(q)) => {
                f == q
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Approx(a), Scalar::Approx(b)) => a.partial_cmp(b),
            (Scalar::Exact(q), Scalar::Approx(f)) => f.partial_cmp(q).map(Ordering::reverse),
            (Scalar::Approx(f), Scalar::Exact(q)) => f.partial_cmp(q),
        }
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }
    fn one() -> Self {
        Scalar::Exact(Rational::from(1))
    }
    fn from_big(n: &Integer) -> Self {
        Scalar::Exact(Rational::from(n))
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => *q == 0,
            Scalar::Approx(f) => f.is_zero(),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Approx(x) => {
                let digits = Precision::from_bits(x.prec()).digits as usize;
                write!(f, "{}", x.to_string_radix(10, Some(digits)))
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseScalarError(pub String);

/// Parses `p`, `p/q`, or a decimal with optional exponent, all exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = Integer::from_str(n.trim()).map_err(|_| err())?;
        let d = Integer::from_str(d.trim()).map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::from((n, d)));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n = Integer::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let q = if scale >= 0 {
        Rational::from(n * ten.pow(scale as u32))
    } else {
        Rational::from((n, ten.pow((-scale) as u32)))
    };
    Ok(if sign < 0 { -q } else { q })
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Scalar::Exact)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => serializer.serialize_str(&q.to_string()),
            Scalar::Approx(f) => {
                let digits = Precision::from_bits(f.prec()).digits;
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("float", &f.to_string_radix(10, None))?;
                map.serialize_entry("digits", &digits)?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Float { float: String, digits: u32 },
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Text(s) => s.parse().map_err(de::Error::custom),
            ScalarRepr::Int(n) => Ok(Scalar::int(n)),
            ScalarRepr::Float { float, digits } => {
                let bits = Precision::digits(digits).bits();
                let parsed = Float::parse(&float).map_err(de::Error::custom)?;
                Ok(Scalar::Approx(Float::with_val(bits, parsed)))
            }
        }
    }
}
