//! Pochhammer symbols, falling factorials, Stirling numbers and elementary
//! symmetric polynomials over any [`Ring`].

use super::ring::Ring;
use rug::Integer;
use std::sync::{Mutex, OnceLock};

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer<R: Ring>(x: &R, n: usize) -> R {
    let mut acc = R::one();
    for k in 0..n {
        acc = acc * (x.clone() + R::from_int(k as i64));
    }
    acc
}

/// Product of rising factorials `(x_1)_n ... (x_r)_n`; `1` for an empty list.
pub fn pochhammer_multi<R: Ring>(xs: &[R], n: usize) -> R {
    xs.iter().fold(R::one(), |acc, x| acc * pochhammer(x, n))
}

/// Falling factorial `x (x-1) ... (x-n+1) = (-1)^n (-x)_n`.
pub fn falling_factorial<R: Ring>(x: &R, n: usize) -> R {
    let mut acc = R::one();
    for k in 0..n {
        acc = acc * (x.clone() - R::from_int(k as i64));
    }
    acc
}

/// Elementary symmetric polynomial `e_k(xs)`.
pub fn elementary_symmetric<R: Ring>(xs: &[R], k: usize) -> R {
    // e[j] after processing a prefix of xs
    let mut e = vec![R::zero(); k + 1];
    e[0] = R::one();
    for x in xs {
        for j in (1..=k).rev() {
            let term = e[j - 1].clone() * x.clone();
            e[j] = e[j].clone() + term;
        }
    }
    e[k].clone()
}

fn stirling2_table() -> &'static Mutex<Vec<Vec<Integer>>> {
    static TABLE: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![vec![Integer::from(1)]]))
}

/// Stirling number of the second kind `S(n, k)`, memoized.
pub fn stirling2(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    let mut table = stirling2_table().lock().expect("stirling table poisoned");
    while table.len() <= n {
        let prev = table.last().expect("table is never empty").clone();
        let m = table.len();
        let mut row = vec![Integer::new(); m + 1];
        for j in 1..=m {
            let keep = if j < prev.len() { Integer::from(&prev[j] * j as u64) } else { Integer::new() };
            row[j] = keep + &prev[j - 1];
        }
        table.push(row);
    }
    table[n][k].clone()
}

/// Signed Stirling number of the first kind `s(n, k)`: `φ_n(x) = Σ_k s(n,k) x^k`.
pub fn stirling1(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    let mut row = vec![Integer::from(1)];
    for m in 0..n {
        // multiply by (x - m)
        let mut next = vec![Integer::new(); row.len() + 1];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= Integer::from(c * m as u64);
        }
        row = next;
    }
    row[k].clone()
}

/// Direction of a basis change between monomials and falling factorials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    PowerToFalling,
    FallingToPower,
}

/// Re-expresses coefficients between the power basis `x^k` and the falling
/// factorial basis `φ_k(x)`.
pub fn stirling_convert<R: Ring>(coeffs: &[R], direction: BasisChange) -> Vec<R> {
    let n = coeffs.len();
    let mut out = vec![R::zero(); n];
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            let s = match direction {
                BasisChange::PowerToFalling => stirling2(k, j),
                BasisChange::FallingToPower => stirling1(k, j),
            };
            if s != 0 {
                *slot = slot.clone() + c.clone() * R::from_big(&s);
            }
        }
    }
    out
}
