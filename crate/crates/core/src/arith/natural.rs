//! Valuations, exact binomials and base-p digit manipulation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::Prime;
use crate::error::{Error, Result};

pub type Natural = BigUint;

/// p-adic valuation; zero has valuation `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_at_least(self, e: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn valuation(n: &BigUint, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p.get());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        n = q;
        v += 1;
    }
}

pub fn valuation_int(n: &BigInt, p: Prime) -> Valuation {
    valuation(n.magnitude(), p)
}

pub fn valuation_u64(mut n: u64, p: Prime) -> Valuation {
    if n == 0 {
        return Valuation::Infinite;
    }
    let mut v = 0;
    while n % p.get() == 0 {
        n /= p.get();
        v += 1;
    }
    Valuation::Finite(v)
}

/// Exact C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Signed binomial, convenient inside alternating sums.
pub fn binomial_int(n: u64, k: u64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// Base-p digits, least significant first; `0` has no digits.
pub fn p_digits(mut m: u64, p: Prime) -> Vec<u64> {
    let mut digits = Vec::new();
    while m > 0 {
        digits.push(m % p.get());
        m /= p.get();
    }
    digits
}

pub fn digit_sum(m: u64, p: Prime) -> u64 {
    p_digits(m, p).iter().sum()
}

/// ⌊log_p m⌋ for m ≥ 1, and 0 for m = 0 (the index-0 coefficient is never
/// scaled).
pub fn floor_log(m: u64, p: Prime) -> u32 {
    if m == 0 {
        0
    } else {
        p_digits(m, p).len() as u32 - 1
    }
}

/// Exponent M with χ(m, ·) the indicator of m + p^M Z_p: the number of base-p
/// digits of m, with 1 for m = 0.
pub fn ball_exponent(m: u64, p: Prime) -> u32 {
    floor_log(m, p) + 1
}

/// m with its leading base-p digit removed.
pub fn m_minus(m: u64, p: Prime) -> Result<u64> {
    if m < p.get() {
        return Err(Error::Domain(format!("m_minus needs m >= p, got m = {m}, p = {p}")));
    }
    let top = p.get().pow(floor_log(m, p));
    Ok(m % top)
}

/// (leading digit, its position) of m ≥ 1.
pub fn leading_digit(m: u64, p: Prime) -> (u64, u32) {
    let s = floor_log(m, p);
    (m / p.get().pow(s), s)
}
