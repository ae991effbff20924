use num_bigint::BigInt;

use crate::analysis::{default_s_max, ud1_check};
use crate::arith::{binomial_int, lucas_u64, small, Prime};
use crate::error::{Error, Result};
use crate::funcspace::{
    mahler_coefficients, table_size, vdp_coefficients, CoefficientSeries, PadicFunction, SeriesKind,
};
use crate::verdict::{CriterionVerdict, Witness};

pub const MP_VDP: &str = "measure-preserving-vdp";
pub const MP_P2: &str = "measure-preserving-ud-p2";
pub const MP_P2_MAHLER: &str = "measure-preserving-ud-p2-mahler";
pub const MP_UD_ODD: &str = "measure-preserving-ud-odd";

fn normalized_mod_p(series: &CoefficientSeries, m: usize) -> Result<u64> {
    series.normalized_mod(m, 1).map_err(|e| match e {
        Error::NotExact { .. } => Error::NotLipschitz(format!("{e}")),
        other => other,
    })
}

/// (i) {b_0, ..., b_{p-1}} is a complete residue system mod p; (ii) for
/// 1 ≤ s < depth and 0 ≤ k < p^s, {b_{k+ℓp^s} : 1 ≤ ℓ ≤ p-1} are the p-1
/// nonzero residues mod p.
pub fn measure_preserving_vdp(series: &CoefficientSeries, depth: u32) -> Result<CriterionVerdict> {
    if series.kind() != SeriesKind::VanDerPut {
        return Err(Error::Domain("measure_preserving_vdp needs a van der Put series".into()));
    }
    let needed = table_size(series.prime(), depth)? as usize;
    if series.len() < needed {
        return Err(Error::InsufficientLength { needed, have: series.len() });
    }
    if series.exponent() < depth {
        return Err(Error::DepthExceeded { requested: depth, depth: series.exponent() });
    }
    let p = series.prime().get();
    let mut seen = vec![usize::MAX; p as usize];
    for m in 0..p as usize {
        let b = normalized_mod_p(series, m)? as usize;
        if seen[b] != usize::MAX {
            let w = Witness::new().with("first", seen[b]).with("second", m).with("residue", b);
            return Ok(CriterionVerdict::fail(MP_VDP, Some(depth), "complete-residues", w));
        }
        seen[b] = m;
    }
    for s in 1..depth {
        let ps = p.pow(s);
        for k in 0..ps {
            let mut hit = vec![false; p as usize];
            for l in 1..p {
                let b = normalized_mod_p(series, (k + l * ps) as usize)? as usize;
                if b == 0 || hit[b] {
                    let w = Witness::new().with("s", s).with("k", k).with("l", l).with("residue", b);
                    return Ok(CriterionVerdict::fail(MP_VDP, Some(depth), "distinct-nonzero", w));
                }
                hit[b] = true;
            }
        }
    }
    Ok(CriterionVerdict::pass(MP_VDP, Some(depth)))
}

fn require_ud1(f: &PadicFunction) -> Result<()> {
    let s_max = default_s_max(f);
    if s_max == 0 {
        return Err(Error::Precondition("the UD1 check needs depth >= 2".into()));
    }
    let out = ud1_check(f, s_max)?;
    if !out.verdict.pass {
        return Err(Error::NotUd1(Box::new(out.verdict)));
    }
    Ok(())
}

fn p2_vdp_conditions(f: &PadicFunction) -> Result<CriterionVerdict> {
    let b = vdp_coefficients(f, 4, 2)?;
    let bn: Vec<u64> = (0..4).map(|m| normalized_mod_p(&b, m)).collect::<Result<_>>()?;
    let checks = [("b0+b1-odd", (bn[0] + bn[1]) % 2), ("b2-odd", bn[2]), ("b3-odd", bn[3])];
    for (name, value) in checks {
        if value != 1 {
            let w = Witness::new().with("b0", bn[0]).with("b1", bn[1]).with("b2", bn[2]).with("b3", bn[3]);
            return Ok(CriterionVerdict::fail(MP_P2, Some(f.depth()), name, w));
        }
    }
    Ok(CriterionVerdict::pass(MP_P2, Some(f.depth())))
}

/// Mahler form of the p = 2 test: a_1 odd.
pub fn measure_preserving_ud_p2_mahler(series: &CoefficientSeries) -> Result<CriterionVerdict> {
    if series.kind() != SeriesKind::Mahler || series.prime().get() != 2 {
        return Err(Error::Domain("needs a Mahler series over Z_2".into()));
    }
    let a1 = series.get(1) % 2;
    Ok(if a1 == 1 {
        CriterionVerdict::pass(MP_P2_MAHLER, Some(series.exponent()))
    } else {
        CriterionVerdict::fail(MP_P2_MAHLER, Some(series.exponent()), "a1-odd", Witness::new().with("a1", series.get(1)))
    })
}

/// For UD1 f on Z_2: b_0 + b_1, b_2 and b_3 odd. The Mahler form (a_1 odd)
/// is evaluated too and must agree.
pub fn measure_preserving_ud_p2(f: &PadicFunction) -> Result<CriterionVerdict> {
    if f.prime().get() != 2 {
        return Err(Error::Domain("measure_preserving_ud_p2 is for p = 2".into()));
    }
    require_ud1(f)?;
    let vdp = p2_vdp_conditions(f)?;
    let mahler = measure_preserving_ud_p2_mahler(&mahler_coefficients(f, 2, 1)?)?;
    if vdp.pass != mahler.pass {
        return Err(Error::Invariant(format!(
            "p = 2 measure-preservation forms disagree: {} vs {}",
            vdp.summary(),
            mahler.summary()
        )));
    }
    Ok(vdp)
}

/// UD1 together with the three congruences, as one criterion: a non-UD1
/// input fails rather than being refused.
pub fn measure_preserving_p2_bundled(f: &PadicFunction) -> Result<CriterionVerdict> {
    match measure_preserving_ud_p2(f) {
        Err(Error::NotUd1(v)) => Ok(CriterionVerdict {
            criterion: MP_P2.to_string(),
            pass: false,
            depth: v.depth,
            failed_condition: Some("ud1".into()),
            witness: v.witness,
        }),
        other => other,
    }
}

/// λ_n^i = (C(i+p, n) - C(i, n)) / p, exactly.
pub fn lambda(n: u64, i: u64, p: Prime) -> BigInt {
    let d = binomial_int(i + p.get(), n) - binomial_int(i, n);
    debug_assert!((&d % BigInt::from(p.get())) == BigInt::from(0) || n == 0);
    d / BigInt::from(p.get())
}

fn lambda_mod_p(n: u64, i: u64, p: Prime) -> u64 {
    let m = BigInt::from(p.get());
    let r = ((lambda(n, i, p) % &m) + &m) % &m;
    u64::try_from(r).expect("below p")
}

/// For UD1 f with p odd: (i) f(0), ..., f(p-1) is a complete residue system
/// mod p; (ii) Σ_{n<p} λ_n^i c_n + Σ_{n≤i} C(i, n) c_{n+p} ≢ 0 mod p for
/// 0 ≤ i < p. The left side of (ii) is cross-checked against b_{i+p}.
pub fn measure_preserving_ud_odd(f: &PadicFunction) -> Result<CriterionVerdict> {
    let prime = f.prime();
    let p = prime.get();
    if p == 2 {
        return Err(Error::Domain("measure_preserving_ud_odd is for odd p".into()));
    }
    require_ud1(f)?;
    let depth = Some(f.depth());
    let values = f.point_values(p, 1)?;
    let mut seen = vec![false; p as usize];
    for (x, &v) in values.iter().enumerate() {
        if seen[v as usize] {
            let w = Witness::new().with("x", x).with("residue", v);
            return Ok(CriterionVerdict::fail(MP_UD_ODD, depth, "complete-residues", w));
        }
        seen[v as usize] = true;
    }
    let a = mahler_coefficients(f, 2 * p, 2)?;
    let c: Vec<u64> = (0..2 * p as usize).map(|n| normalized_mod_p(&a, n)).collect::<Result<_>>()?;
    let b = vdp_coefficients(f, 2 * p, 2)?;
    for i in 0..p {
        let mut acc = 0;
        for n in 0..p {
            acc = small::add(acc, small::mul(lambda_mod_p(n, i, prime), c[n as usize], p), p);
        }
        for n in 0..=i {
            acc = small::add(acc, small::mul(lucas_u64(i, n, prime), c[(n + p) as usize], p), p);
        }
        let bip = normalized_mod_p(&b, (i + p) as usize)?;
        if acc != bip {
            return Err(Error::Invariant(format!("lambda form {acc} differs from b_{} = {bip}", i + p)));
        }
        if acc == 0 {
            return Ok(CriterionVerdict::fail(MP_UD_ODD, depth, "lambda-nonvanishing", Witness::new().with("i", i)));
        }
    }
    Ok(CriterionVerdict::pass(MP_UD_ODD, depth))
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

    fn vdp_series(text: &str, prime: u64, depth: u32) -> CoefficientSeries {
        let f = poly(text, prime, depth);
        vdp_coefficients(&f, prime.pow(depth), depth).unwrap()
    }

    #[test]
    fn vdp_criterion_examples() {
        assert!(measure_preserving_vdp(&vdp_series("x+1", 3, 3), 3).unwrap().pass);
        let c = measure_preserving_vdp(&vdp_series("4", 3, 3), 3).unwrap();
        assert_eq!(c.failed_condition.as_deref(), Some("complete-residues"));
        let sq = measure_preserving_vdp(&vdp_series("x^2", 2, 2), 2).unwrap();
        assert!(!sq.pass);
    }

    #[test]
    fn p2_examples() {
        assert!(measure_preserving_ud_p2(&poly("x+1", 2, 4)).unwrap().pass);
        assert!(measure_preserving_ud_p2(&poly("x", 2, 4)).unwrap().pass);
        let v = measure_preserving_ud_p2(&poly("x^2+x", 2, 4)).unwrap();
        assert!(!v.pass);
        let a = mahler_coefficients(&poly("x^2+x", 2, 4), 4, 4).unwrap();
        assert_eq!(a.get(1), 2);
        assert!(!measure_preserving_ud_p2_mahler(&a).unwrap().pass);
    }

    #[test]
    fn p2_refuses_non_ud1() {
        let mut terms = vec![0u64; 16];
        terms[1] = 1;
        terms[5] = 4;
        let s = CoefficientSeries::new(SeriesKind::Mahler, p(2), 4, terms).unwrap();
        let f = PadicFunction::from_series(s, 4).unwrap();
        assert!(matches!(measure_preserving_ud_p2(&f), Err(Error::NotUd1(_))));
        let bundled = measure_preserving_p2_bundled(&f).unwrap();
        assert_eq!(bundled.failed_condition.as_deref(), Some("ud1"));
        assert!(bundled.witness.is_some());
    }

    #[test]
    fn lambda_values() {
        for prime in [3, 5, 7, 11] {
            assert_eq!(lambda(1, 0, p(prime)), BigInt::from(1));
            assert_eq!(lambda(0, 4, p(prime)), BigInt::from(0));
        }
        // (C(5, 2) - C(2, 2)) / 3 = 3
        assert_eq!(lambda(2, 2, p(3)), BigInt::from(3));
    }

    #[test]
    fn odd_examples() {
        assert!(measure_preserving_ud_odd(&poly("x+1", 3, 4)).unwrap().pass);
        let v = measure_preserving_ud_odd(&poly("x^3", 3, 4)).unwrap();
        assert_eq!(v.failed_condition.as_deref(), Some("lambda-nonvanishing"));
        assert_eq!(v.witness.unwrap().get("i"), Some("0"));
        let w = measure_preserving_ud_odd(&poly("x^2", 5, 3)).unwrap();
        assert_eq!(w.failed_condition.as_deref(), Some("complete-residues"));
    }
}
