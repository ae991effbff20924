//! Binomial coefficients modulo p and p^e, Legendre valuations, harmonic sums.

use num_bigint::BigUint;

use super::natural::{digit_sum, p_digits};
use super::residue::{small, Modulus, Residue};
use super::Prime;
use crate::error::{Error, Result};

/// C(n, k) mod p as the digit-wise product of Lucas' theorem.
pub fn lucas_binomial_mod_p(n: u64, k: u64, p: Prime) -> Residue {
    let m = Modulus::new(p, 1).expect("exponent 1");
    Residue::from_u64(lucas_u64(n, k, p), &m)
}

pub fn lucas_u64(mut n: u64, mut k: u64, p: Prime) -> u64 {
    let pv = p.get();
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % pv, k % pv);
        if ki > ni {
            return 0;
        }
        acc = small::mul(acc, small_binomial_mod_p(ni, ki, pv), pv);
        n /= pv;
        k /= pv;
    }
    acc
}

// C(n, k) mod p for n < p.
fn small_binomial_mod_p(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = small::mul(num, n - i, p);
        den = small::mul(den, i + 1, p);
    }
    small::mul(num, small::inv(den, p).expect("den < p is a unit"), p)
}

/// v_p(C(l p^s, j)) from Legendre's digit-sum formula.
pub fn legendre_binomial_valuation(l: u64, s: u32, j: u64, p: Prime) -> Result<u64> {
    if l == 0 || l >= p.get() {
        return Err(Error::Domain(format!("l = {l} must satisfy 1 <= l <= p - 1")));
    }
    if s == 0 {
        return Err(Error::Domain("s must be at least 1".into()));
    }
    let n = p
        .checked_pow(s)
        .and_then(|q| q.checked_mul(l))
        .ok_or_else(|| Error::Domain(format!("l * p^s overflows for l = {l}, s = {s}")))?;
    if j == 0 || j >= n {
        return Err(Error::Domain(format!("j = {j} must satisfy 1 <= j < l p^s = {n}")));
    }
    Ok(binomial_valuation_legendre(n, j, p))
}

/// v_p(C(n, k)) = (S(k) + S(n - k) - S(n)) / (p - 1) with S the digit sum.
pub fn binomial_valuation_legendre(n: u64, k: u64, p: Prime) -> u64 {
    assert!(k <= n);
    (digit_sum(k, p) + digit_sum(n - k, p) - digit_sum(n, p)) / (p.get() - 1)
}

/// H_m = Σ_{j ≤ m} 1/j modulo p^k, for m < p.
pub fn harmonic_mod(m: u64, p: Prime, k: u32) -> Result<Residue> {
    if m >= p.get() {
        return Err(Error::Domain(format!("harmonic_mod needs m < p, got m = {m}, p = {p}")));
    }
    let modulus = Modulus::new(p, k)?;
    let mut acc = Residue::zero(&modulus);
    for j in 1..=m {
        let inv = Residue::from_u64(j, &modulus).inverse().expect("j < p is a unit");
        acc = &acc + &inv;
    }
    Ok(acc)
}

/// Binomial coefficients modulo a prime power q = p^e (q < 2^32) through the
/// unit parts of factorials: n! = p^{v_p(n!)} Π_i P(⌊n/p^i⌋), where P(m) is
/// the product of the integers in 1..=m prime to p, reduced mod q.
#[derive(Clone, Debug)]
pub struct PrimePowerBinomial {
    p: u64,
    e: u32,
    q: u64,
    partial: Vec<u64>,
}

impl PrimePowerBinomial {
    pub fn new(p: Prime, e: u32) -> Result<Self> {
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= 1 << 24)
            .ok_or(Error::TableTooLarge { prime: p.get(), exponent: e })?;
        let mut partial = Vec::with_capacity(q as usize);
        let mut acc = 1 % q;
        partial.push(acc);
        for j in 1..q {
            if j % p.get() != 0 {
                acc = small::mul(acc, j, q);
            }
            partial.push(acc);
        }
        Ok(PrimePowerBinomial { p: p.get(), e, q, partial })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn unit_product(&self, m: u64) -> u64 {
        let full = self.partial[self.q as usize - 1];
        small::mul(small::pow(full, m / self.q, self.q), self.partial[(m % self.q) as usize], self.q)
    }

    /// Unit part of n! modulo q.
    pub fn unit_factorial(&self, mut n: u64) -> u64 {
        let mut acc = 1 % self.q;
        while n > 0 {
            acc = small::mul(acc, self.unit_product(n), self.q);
            n /= self.p;
        }
        acc
    }

    pub fn factorial_valuation(&self, mut n: u64) -> u64 {
        let mut v = 0;
        while n > 0 {
            n /= self.p;
            v += n;
        }
        v
    }

    pub fn binomial(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let v = self.factorial_valuation(n) - self.factorial_valuation(k) - self.factorial_valuation(n - k);
        if v >= self.e as u64 {
            return 0;
        }
        let den = small::mul(self.unit_factorial(k), self.unit_factorial(n - k), self.q);
        let unit = small::mul(self.unit_factorial(n), small::inv(den, self.q).expect("unit"), self.q);
        small::mul(unit, self.p.pow(v as u32), self.q)
    }
}

/// Exact binomial reduced mod m, used as the reference in tests.
pub fn binomial_mod_exact(n: u64, k: u64, m: u64) -> u64 {
    let r = super::natural::binomial(n, k) % BigUint::from(m);
    u64::try_from(&r).expect("reduced below m")
}

/// Base-p digits padded with zeros to `len`.
pub fn padded_digits(m: u64, p: Prime, len: usize) -> Vec<u64> {
    let mut d = p_digits(m, p);
    d.resize(len.max(d.len()), 0);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::natural::{binomial, valuation, Valuation};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial_mod_p(18, 3, p(3)).to_u64(), Some(0));
        assert_eq!(lucas_binomial_mod_p(7, 3, p(2)).to_u64(), Some(1));
        assert_eq!(lucas_binomial_mod_p(123, 0, p(7)).to_u64(), Some(1));
        assert_eq!(lucas_binomial_mod_p(3, 5, p(7)).to_u64(), Some(0));
    }

    #[test]
    fn lucas_matches_exact_up_to_300() {
        for prime in [2, 3, 5, 7, 11, 13] {
            let pr = p(prime);
            for n in 0..=300 {
                for k in 0..=300 {
                    assert_eq!(lucas_u64(n, k, pr), binomial_mod_exact(n, k, prime), "C({n},{k}) mod {prime}");
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_binomial_valuation(2, 2, 3, p(3)).unwrap(), 1);
        assert_eq!(legendre_binomial_valuation(1, 1, 1, p(5)).unwrap(), 1);
        assert_eq!(legendre_binomial_valuation(1, 3, 4, p(2)).unwrap(), 1);
        assert!(legendre_binomial_valuation(3, 1, 1, p(3)).is_err());
        assert!(legendre_binomial_valuation(0, 1, 1, p(3)).is_err());
        assert!(legendre_binomial_valuation(2, 1, 6, p(3)).is_err());
        assert!(legendre_binomial_valuation(1, 0, 1, p(3)).is_err());
        assert_eq!(valuation(&binomial(18, 3), p(3)), Valuation::Finite(1));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_mod(0, p(7), 2).unwrap().to_u64(), Some(0));
        assert_eq!(harmonic_mod(2, p(5), 1).unwrap().to_u64(), Some(4));
        assert_eq!(harmonic_mod(4, p(5), 1).unwrap().to_u64(), Some(0));
        // H_{p-1} ≡ 0 mod p^2 for p ≥ 5 (Wolstenholme).
        assert_eq!(harmonic_mod(6, p(7), 2).unwrap().to_u64(), Some(0));
        assert!(harmonic_mod(5, p(5), 1).is_err());
    }

    #[test]
    fn prime_power_binomial_matches_exact() {
        for (prime, e) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (7, 2), (3, 3), (13, 2)] {
            let engine = PrimePowerBinomial::new(p(prime), e).unwrap();
            let q = engine.modulus();
            for n in 0..=260 {
                for k in 0..=n + 1 {
                    assert_eq!(engine.binomial(n, k), binomial_mod_exact(n, k, q), "C({n},{k}) mod {prime}^{e}");
                }
            }
        }
    }
}
