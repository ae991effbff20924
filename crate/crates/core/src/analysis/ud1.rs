use serde::Serialize;

use super::mahler::mahler_ud1_predicate;
use crate::arith::{small, Prime};
use crate::error::{Error, Result};
use crate::funcspace::{
    lipschitz_check, mahler_coefficients, table_size, vdp_coefficients, CoefficientSeries, Form, PadicFunction,
    SeriesKind,
};
use crate::verdict::{CriterionVerdict, Witness};

pub const UD1: &str = "ud1";
pub const VDP_UD1: &str = "ud1-vdp-relations";

/// ∂₁f on the residues 0..p-1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedFunction {
    #[serde(serialize_with = "ser_prime")]
    pub prime: Prime,
    #[serde(serialize_with = "ser_decimal")]
    pub values: Vec<u64>,
}

fn ser_prime<S: serde::Serializer>(p: &Prime, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub(crate) fn ser_decimal<S: serde::Serializer>(v: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(u64::to_string))
}

pub(crate) fn ser_decimal_nested<S: serde::Serializer>(
    v: &[Vec<u64>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>()))
}

impl DerivedFunction {
    /// ∂₁f(r) for any r, through r mod p.
    pub fn at(&self, r: u64) -> u64 {
        self.values[(r % self.prime.get()) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ud1Outcome {
    #[serde(flatten)]
    pub verdict: CriterionVerdict,
    pub derived: Option<DerivedFunction>,
}

pub fn default_s_max(f: &PadicFunction) -> u32 {
    f.depth().saturating_sub(1)
}

fn require_lipschitz(f: &PadicFunction) -> Result<()> {
    if let Form::Polynomial(_) = f.form() {
        return Ok(());
    }
    let v = lipschitz_check(f)?;
    if !v.pass {
        return Err(Error::NotLipschitz(v.summary()));
    }
    Ok(())
}

/// Tests f(u + p^s h) ≡ f(u) + p^s h ∂₁f(u) mod p^{s+1} for u < p^{s_max},
/// 1 ≤ s ≤ s_max - 1, 1 ≤ h ≤ p - 1, with ∂₁f read off the s = 1 first
/// differences. A pass certifies the property up to depth s_max only.
pub fn ud1_check(f: &PadicFunction, s_max: u32) -> Result<Ud1Outcome> {
    if s_max == 0 || s_max + 1 > f.depth() {
        return Err(Error::Precondition(format!(
            "ud1_check needs 1 <= s_max <= depth - 1, got s_max = {s_max} at depth {}",
            f.depth()
        )));
    }
    require_lipschitz(f)?;
    let p = f.prime().get();
    let table = f.values_mod(s_max + 1)?;
    let p2 = p * p;
    let derived: Vec<u64> =
        (0..p).map(|r| small::sub(table[(r + p) as usize] % p2, table[r as usize] % p2, p2) / p % p).collect();
    let span = table_size(f.prime(), s_max)?;
    for s in 1..s_max {
        let ps = p.pow(s);
        let m = ps * p;
        for u in 0..span {
            let base = table[u as usize] % m;
            for h in 1..p {
                let lhs = table[(u + ps * h) as usize] % m;
                let rhs = (base + ps * ((h * derived[(u % p) as usize]) % p)) % m;
                if lhs != rhs {
                    let w = Witness::new().with("u", u).with("s", s).with("h", h).with("lhs", lhs).with("rhs", rhs);
                    return Ok(Ud1Outcome {
                        verdict: CriterionVerdict::fail(UD1, Some(s_max), "difference-congruence", w),
                        derived: None,
                    });
                }
            }
        }
    }
    Ok(Ud1Outcome {
        verdict: CriterionVerdict::pass(UD1, Some(s_max)),
        derived: Some(DerivedFunction { prime: f.prime(), values: derived }),
    })
}

/// Checks B_{r+ℓp^s} ≡ ℓ B_{r+p^s} (mod p^{s+1}) and B_{r+ℓp^s} ≡ ℓ p^s
/// ∂₁f(r) (mod p^{s+1}) with ∂₁f(r) = b_{(r mod p)+p}, for 1 ≤ s < depth.
pub fn vdp_ud1_relations_check(series: &CoefficientSeries, depth: u32) -> Result<CriterionVerdict> {
    if series.kind() != SeriesKind::VanDerPut {
        return Err(Error::Domain("vdp_ud1_relations_check needs a van der Put series".into()));
    }
    let needed = table_size(series.prime(), depth)? as usize;
    if series.len() < needed {
        return Err(Error::InsufficientLength { needed, have: series.len() });
    }
    if series.exponent() < depth {
        return Err(Error::DepthExceeded { requested: depth, depth: series.exponent() });
    }
    let p = series.prime().get();
    let p2 = p * p;
    let derived: Vec<u64> = (0..p).map(|r| series.get((r + p) as usize) % p2 / p).collect();
    let fail = |cond: &str, r: u64, s: u32, l: u64, lhs: u64, rhs: u64| {
        let w = Witness::new().with("r", r).with("s", s).with("l", l).with("lhs", lhs).with("rhs", rhs);
        Ok(CriterionVerdict::fail(VDP_UD1, Some(depth), cond, w))
    };
    for s in 1..depth {
        let ps = p.pow(s);
        let m = ps * p;
        for r in 0..ps {
            let first = series.get((r + ps) as usize) % m;
            for l in 1..p {
                let lhs = series.get((r + l * ps) as usize) % m;
                let scaled = small::mul(l, first, m);
                if l >= 2 && lhs != scaled {
                    return fail("scaling", r, s, l, lhs, scaled);
                }
                let rhs = ps * (l * derived[(r % p) as usize] % p);
                if lhs != rhs {
                    return fail("derivative", r, s, l, lhs, rhs);
                }
            }
        }
    }
    Ok(CriterionVerdict::pass(VDP_UD1, Some(depth)))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub s_max: u32,
    pub direct: CriterionVerdict,
    pub vdp: CriterionVerdict,
    pub mahler: CriterionVerdict,
    pub agree: bool,
}

/// Runs the direct sweep at s_max against the van der Put relations and the
/// Mahler divisibilities on indices below p^{s_max}, modulo p^{s_max}: the
/// three see exactly the same congruences.
pub fn ud1_equivalence_crosscheck(f: &PadicFunction, s_max: u32) -> Result<EquivalenceReport> {
    let direct = ud1_check(f, s_max)?.verdict;
    let count = table_size(f.prime(), s_max)?;
    let vdp = vdp_ud1_relations_check(&vdp_coefficients(f, count, s_max)?, s_max)?;
    let mahler = mahler_ud1_predicate(&mahler_coefficients(f, count, s_max)?)?;
    let agree = direct.pass == vdp.pass && direct.pass == mahler.pass;
    Ok(EquivalenceReport { s_max, direct, vdp, mahler, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn poly(text: &str, prime: u64, depth: u32) -> PadicFunction {
        PadicFunction::parse_polynomial(text, p(prime), depth).unwrap()
    }

    #[test]
    fn counter_cubic_is_ud1() {
        let out = ud1_check(&poly("1+3*x+2*x^3", 2, 4), 3).unwrap();
        assert!(out.verdict.pass);
        assert_eq!(out.verdict.depth, Some(3));
        assert_eq!(out.derived.unwrap().values, vec![1, 1]);
    }

    #[test]
    fn translations_have_unit_derivative() {
        for prime in [2, 3, 5, 7] {
            let out = ud1_check(&poly("x+4", prime, 3), 2).unwrap();
            assert!(out.verdict.pass);
            assert!(out.derived.unwrap().values.iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn mahler_a5_four_fails_direct_check() {
        let mut terms = vec![0u64; 16];
        terms[5] = 4;
        let s = CoefficientSeries::new(SeriesKind::Mahler, p(2), 4, terms).unwrap();
        let f = PadicFunction::from_series(s, 4).unwrap();
        let out = ud1_check(&f, 3).unwrap();
        assert!(!out.verdict.pass);
        assert!(out.derived.is_none());
        let w = out.verdict.witness.unwrap();
        assert_eq!(w.get("s"), Some("2"));
    }

    #[test]
    fn preconditions() {
        assert!(ud1_check(&poly("x", 3, 3), 3).is_err());
        assert!(ud1_check(&poly("x", 3, 3), 0).is_err());
        let mut values: Vec<u64> = (0..8).collect();
        values[4] = 1;
        let f = PadicFunction::value_table(p(2), 3, values).unwrap();
        assert!(matches!(ud1_check(&f, 2), Err(Error::NotLipschitz(_))));
    }

    #[test]
    fn vdp_relations_examples() {
        let f = poly("x+1", 2, 4);
        let b = vdp_coefficients(&f, 16, 4).unwrap();
        assert!(vdp_ud1_relations_check(&b, 4).unwrap().pass);
        let g = poly("x^4+2*x^3+x+2", 3, 3);
        assert!(vdp_ud1_relations_check(&vdp_coefficients(&g, 27, 3).unwrap(), 3).unwrap().pass);

        let mut terms = b.terms().to_vec();
        terms[5] += 2;
        let bad = CoefficientSeries::new(SeriesKind::VanDerPut, p(2), 4, terms).unwrap();
        let v = vdp_ud1_relations_check(&bad, 4).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        assert_eq!((w.get("r"), w.get("s"), w.get("l")), (Some("1"), Some("2"), Some("1")));
    }

    #[test]
    fn verdict_json_shape() {
        let out = ud1_check(&poly("1+3*x+2*x^3", 2, 4), 3).unwrap();
        let v: serde_json::Value = serde_json::to_value(&out).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["depth"], 3);
        assert_eq!(v["derived"]["values"], serde_json::json!(["1", "1"]));
        assert!(v["witness"].is_null());
    }
}
