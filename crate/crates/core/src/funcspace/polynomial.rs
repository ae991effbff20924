//! Integer polynomials and their text grammar: terms `c`, `c*x^k`, `x^k`,
//! `c*x`, `x`, joined by `+`/`-`, whitespace ignored.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::small;
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    // coeffs[i] multiplies x^i; no trailing zeros.
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Coefficients reduced into 0..m.
    pub fn reduced(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.coeffs.iter().map(|c| c.mod_floor(&mb).to_u64().expect("below m")).collect()
    }

    pub fn eval_big(&self, x: &BigUint, m: &BigUint) -> BigUint {
        let mi = BigInt::from_biguint(Sign::Plus, m.clone());
        let x = x % m;
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            let c = c.mod_floor(&mi).magnitude().clone();
            acc = (acc * &x + c) % m;
        }
        acc
    }

    pub fn eval_exact(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

/// A polynomial with coefficients reduced modulo a word-size m, for fast
/// repeated evaluation.
#[derive(Clone, Debug)]
pub struct ReducedPolynomial {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ReducedPolynomial {
    pub fn new(poly: &IntPolynomial, modulus: u64) -> Self {
        ReducedPolynomial { coeffs: poly.reduced(modulus), modulus }
    }

    pub fn from_residues(coeffs: Vec<u64>, modulus: u64) -> Self {
        ReducedPolynomial { coeffs: coeffs.into_iter().map(|c| c % modulus).collect(), modulus }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = x % m;
        self.coeffs.iter().rev().fold(0, |acc, &c| small::add(small::mul(acc, x, m), c, m))
    }

    /// Formal derivative, same modulus.
    pub fn derivative(&self) -> ReducedPolynomial {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| small::mul(c, i as u64 % m, m)).collect();
        ReducedPolynomial { coeffs, modulus: m }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            let mag = c.magnitude();
            let body = match (i, mag == &BigUint::from(1u8)) {
                (0, _) => mag.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{mag}*x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{mag}*x^{i}"),
            };
            write!(f, "{sign}{body}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }
}

struct Parser {
    // Non-whitespace characters with their byte offsets in the input.
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, end: text.len() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn error<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn parse(mut self) -> Result<IntPolynomial> {
        if self.chars.is_empty() {
            return self.error("empty polynomial");
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return self.error("expected '+' or '-'"),
            };
            first = false;
            let (coeff, power) = self.term()?;
            if power >= coeffs.len() {
                coeffs.resize(power + 1, BigInt::zero());
            }
            if negative {
                coeffs[power] -= coeff;
            } else {
                coeffs[power] += coeff;
            }
        }
        Ok(IntPolynomial::new(coeffs))
    }

    fn term(&mut self) -> Result<(BigInt, usize)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.number()?;
                if self.peek() == Some('*') {
                    self.pos += 1;
                    if self.peek() != Some('x') {
                        return self.error("expected 'x' after '*'");
                    }
                    let power = self.monomial()?;
                    Ok((coeff, power))
                } else {
                    Ok((coeff, 0))
                }
            }
            Some('x') => Ok((BigInt::from(1), self.monomial()?)),
            Some(_) => self.error("expected a coefficient or 'x'"),
            None => self.error("expected a term"),
        }
    }

    fn monomial(&mut self) -> Result<usize> {
        self.pos += 1; // the 'x'
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.offset();
        let e = self.number()?;
        match e.to_usize() {
            Some(e) if e <= MAX_DEGREE => Ok(e),
            _ => Err(Error::Parse { pos: start, msg: format!("exponent above {MAX_DEGREE}") }),
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return self.error("expected digits");
        }
        Ok(digits.parse().expect("ascii digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn grammar() {
        assert_eq!(parse("1+3*x+2*x^3"), IntPolynomial::from_i64s(&[1, 3, 0, 2]));
        assert_eq!(parse(" 2 * x ^ 2 + 3*x + 1 "), IntPolynomial::from_i64s(&[1, 3, 2]));
        assert_eq!(parse("x^5+1"), IntPolynomial::from_i64s(&[1, 0, 0, 0, 0, 1]));
        assert_eq!(parse("-x+x^2-7"), IntPolynomial::from_i64s(&[-7, -1, 1]));
        assert_eq!(parse("x+x"), IntPolynomial::from_i64s(&[0, 2]));
        assert_eq!(parse("0"), IntPolynomial::new(vec![]));
        assert_eq!(parse("x-x"), IntPolynomial::new(vec![]));
        assert_eq!(parse("123456789012345678901234567890*x").coeff(1).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = |s: &str| match s.parse::<IntPolynomial>() {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(err(""), 0);
        assert_eq!(err("x+"), 2);
        assert_eq!(err("3*y"), 2);
        assert_eq!(err("x^"), 2);
        assert_eq!(err("1 + 2x"), 5);
        assert_eq!(err("x^99999999"), 2);
    }

    #[test]
    fn display_round_trips() {
        for s in ["1+3*x+2*x^3", "-7-x+x^2", "0", "4*x^5", "x"] {
            let p = parse(s);
            assert_eq!(p.to_string(), s);
            assert_eq!(parse(&p.to_string()), p);
        }
    }

    #[test]
    fn evaluation() {
        let f = parse("1+3*x+2*x^3");
        assert_eq!(f.eval_big(&BigUint::from(2u8), &BigUint::from(4u8)), BigUint::from(3u8));
        assert_eq!(f.eval_exact(&BigInt::from(3)), BigInt::from(64));
        let r = ReducedPolynomial::new(&parse("-x+x^2-7"), 9);
        assert_eq!(r.eval(4), 16 - 4 - 7);
        assert_eq!(r.derivative().coeffs(), &[8, 2]);
    }
}
