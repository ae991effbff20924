//! Residues modulo p^k with arbitrary-precision representatives.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::natural::{valuation, Valuation};
use super::Prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    prime: Prime,
    exponent: u32,
    value: Arc<BigUint>,
}

impl Modulus {
    pub fn new(prime: Prime, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::Domain("modulus exponent must be at least 1".into()));
        }
        Ok(Modulus { prime, exponent, value: Arc::new(prime.pow(exponent)) })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn reduce(&self, n: &BigUint) -> BigUint {
        n % self.value.as_ref()
    }

    pub fn reduce_int(&self, n: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, self.value.as_ref().clone());
        n.mod_floor(&m).magnitude().clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: &BigUint, modulus: &Modulus) -> Self {
        Residue { value: modulus.reduce(value), modulus: modulus.clone() }
    }

    pub fn from_int(value: &BigInt, modulus: &Modulus) -> Self {
        Residue { value: modulus.reduce_int(value), modulus: modulus.clone() }
    }

    pub fn from_u64(value: u64, modulus: &Modulus) -> Self {
        Self::new(&BigUint::from(value), modulus)
    }

    pub fn zero(modulus: &Modulus) -> Self {
        Residue { value: BigUint::zero(), modulus: modulus.clone() }
    }

    pub fn one(modulus: &Modulus) -> Self {
        Self::from_u64(1, modulus)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// The representative as u64, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.value).ok()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % self.modulus.prime.get()).is_zero()
    }

    /// Valuation of the canonical representative. A zero residue reports
    /// `Infinite`, meaning "divisible by every available power".
    pub fn valuation(&self) -> Valuation {
        valuation(&self.value, self.modulus.prime)
    }

    /// Image under Z/p^k -> Z/p^j for j ≤ k.
    pub fn reduce_to(&self, exponent: u32) -> Result<Residue> {
        if exponent > self.modulus.exponent {
            return Err(Error::DepthExceeded { requested: exponent, depth: self.modulus.exponent });
        }
        let m = Modulus::new(self.modulus.prime, exponent)?;
        Ok(Residue::new(&self.value, &m))
    }

    pub fn pow(&self, e: u64) -> Residue {
        Residue {
            value: self.value.modpow(&BigUint::from(e), &self.modulus.value),
            modulus: self.modulus.clone(),
        }
    }

    pub fn inverse(&self) -> Option<Residue> {
        if !self.is_unit() {
            return None;
        }
        let m = BigInt::from(self.modulus.value.as_ref().clone());
        let a = BigInt::from(self.value.clone());
        let g = a.extended_gcd(&m);
        debug_assert!(g.gcd.is_one());
        Some(Residue::from_int(&g.x, &self.modulus))
    }

    fn check_same(&self, other: &Residue) {
        assert_eq!(self.modulus, other.modulus, "residues with different moduli");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Residue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value.to_string())
    }
}

impl<'a> Add<&'a Residue> for &'a Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        self.check_same(rhs);
        Residue::new(&(&self.value + &rhs.value), &self.modulus)
    }
}

impl<'a> Sub<&'a Residue> for &'a Residue {
    type Output = Residue;
    fn sub(self, rhs: &Residue) -> Residue {
        self.check_same(rhs);
        let v = &self.value + self.modulus.value.as_ref() - &rhs.value;
        Residue::new(&v, &self.modulus)
    }
}

impl<'a> Mul<&'a Residue> for &'a Residue {
    type Output = Residue;
    fn mul(self, rhs: &Residue) -> Residue {
        self.check_same(rhs);
        Residue::new(&(&self.value * &rhs.value), &self.modulus)
    }
}

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new(&(self.modulus.value.as_ref() - &self.value), &self.modulus)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Residue> for Residue {
            type Output = Residue;
            fn $f(self, rhs: Residue) -> Residue {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Modular arithmetic on u64 residues; the modulus must stay below 2^32 so
/// products fit.
pub mod small {
    pub fn mul(a: u64, b: u64, m: u64) -> u64 {
        ((a as u128 * b as u128) % m as u128) as u64
    }

    pub fn add(a: u64, b: u64, m: u64) -> u64 {
        (a + b) % m
    }

    pub fn sub(a: u64, b: u64, m: u64) -> u64 {
        (a + m - b % m) % m
    }

    pub fn pow(mut a: u64, mut e: u64, m: u64) -> u64 {
        let mut acc = 1 % m;
        a %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a, m);
            }
            a = mul(a, a, m);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a modulo m when gcd(a, m) = 1.
    pub fn inv(a: u64, m: u64) -> Option<u64> {
        let (mut r0, mut r1) = (m as i128, (a % m) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(m as i128) as u64)
    }

    /// Signed integer reduced into 0..m.
    pub fn from_i64(a: i64, m: u64) -> u64 {
        (a as i128).rem_euclid(m as i128) as u64
    }
}
