use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::funcspace::{mahler_coefficients, vdp_coefficients, PadicFunction};
use crate::verdict::{CriterionVerdict, Witness};

pub const LARIN: &str = "larin";
pub const MAHLER_P2: &str = "mahler-ergodic-p2";
pub const VDP_P2: &str = "vdp-ergodic-p2";

/// Coefficients of A x^3 + B x^2 + C x + D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicCoeffs {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl CubicCoeffs {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    /// Ascending coefficient list [D, C, B, A].
    pub fn ascending(&self) -> Vec<BigInt> {
        vec![self.d.clone(), self.c.clone(), self.b.clone(), self.a.clone()]
    }
}

fn md(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    u64::try_from(r).expect("reduced below a word")
}

/// Checks `value ≡ want (mod m)` for each condition in order and reports the
/// first one that fails.
fn congruences(name: &str, conds: &[(&str, u64, u64, u64)]) -> CriterionVerdict {
    for &(label, value, want, m) in conds {
        if value % m != want {
            let w = Witness::new().with("value", value % m).with("required", want).with("modulus", m);
            return CriterionVerdict::fail(name, None, label, w);
        }
    }
    CriterionVerdict::pass(name, None)
}

/// Transitivity mod 8 of a cubic, with the constant term required odd.
pub fn larin_transitive_mod8(c: &CubicCoeffs) -> CriterionVerdict {
    let (a, b, cc, d) = (md(&c.a, 8), md(&c.b, 8), md(&c.c, 8), md(&c.d, 8));
    congruences(
        LARIN,
        &[("A=0 mod 4", a, 0, 4), ("B=0 mod 2", b, 0, 2), ("B+C=1 mod 4", b + cc, 1, 4), ("D=1 mod 2", d, 1, 2)],
    )
}

/// Ergodicity from the Mahler coefficients a0..a3 of a UD1 1-Lipschitz map on Z_2.
pub fn mahler_ergodic_p2(a: &[BigInt]) -> Result<CriterionVerdict> {
    if a.len() < 4 {
        return Err(Error::InsufficientLength { needed: 4, have: a.len() });
    }
    let v: Vec<u64> = a[..4].iter().map(|x| md(x, 8)).collect();
    Ok(congruences(
        MAHLER_P2,
        &[("a0=1 mod 2", v[0], 1, 2), ("a1=1 mod 4", v[1], 1, 4), ("a2=0 mod 4", v[2], 0, 4), ("a3=0 mod 8", v[3], 0, 8)],
    ))
}

/// Ergodicity from the normalized van der Put coefficients b0..b3.
pub fn vdp_ergodic_p2(b: &[BigInt]) -> Result<CriterionVerdict> {
    if b.len() < 4 {
        return Err(Error::InsufficientLength { needed: 4, have: b.len() });
    }
    let v: Vec<u64> = b[..4].iter().map(|x| md(x, 4)).collect();
    Ok(congruences(
        VDP_P2,
        &[
            ("b0=1 mod 2", v[0], 1, 2),
            ("b0+b1=3 mod 4", v[0] + v[1], 3, 4),
            ("b2=1 mod 2", v[2], 1, 2),
            ("b2+b3=2 mod 4", v[2] + v[3], 2, 4),
        ],
    ))
}

fn require_p2(f: &PadicFunction) -> Result<()> {
    if f.prime().get() != 2 || f.depth() < 3 {
        return Err(Error::Precondition("needs p = 2 and depth >= 3".into()));
    }
    Ok(())
}

/// a0..a3 modulo 8.
pub fn p2_mahler_inputs(f: &PadicFunction) -> Result<Vec<BigInt>> {
    require_p2(f)?;
    let s = mahler_coefficients(f, 4, 3)?;
    Ok(s.terms().iter().map(|&t| BigInt::from(t)).collect())
}

/// b0..b3 modulo 4 (B2, B3 are halved).
pub fn p2_vdp_inputs(f: &PadicFunction) -> Result<Vec<BigInt>> {
    require_p2(f)?;
    let s = vdp_coefficients(f, 4, 3)?;
    (0..4).map(|m| Ok(BigInt::from(s.normalized_mod(m, 2)?))).collect()
}
