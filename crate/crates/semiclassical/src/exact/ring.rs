//! Minimal commutative-ring interface shared by numeric scalars, polynomials
//! and the symbolic parameter algebra.

use rug::Integer;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(n: &Integer) -> Self;
    fn is_zero(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_big(&Integer::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Sum of a sequence of ring elements.
pub fn sum<R: Ring, I: IntoIterator<Item = R>>(items: I) -> R {
    items.into_iter().fold(R::zero(), |acc, x| acc + x)
}

/// Product of a sequence of ring elements.
pub fn product<R: Ring, I: IntoIterator<Item = R>>(items: I) -> R {
    items.into_iter().fold(R::one(), |acc, x| acc * x)
}
