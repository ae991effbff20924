use serde::Serialize;

use super::cycles::transitive_mod;
use super::measure::measure_preserving_vdp;
use crate::analysis::{default_s_max, ud1_check};
use crate::arith::small;
use crate::error::{Error, Result};
use crate::funcspace::{table_size, vdp_coefficients, PadicFunction};
use crate::verdict::{CriterionVerdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelProduct {
    pub s: u32,
    /// (Π_{j<p^s} B_{j+p^s}) / p^{s p^s} mod p.
    pub value: String,
}

/// The four conditions for a UD1 function: (1) transitive mod p; (2)
/// measure-preserving; (3) f^{p^s}(0) ≢ 0 mod p^{s+1} for 1 ≤ s < depth;
/// (4) (Π_{j<p^s} B_{j+p^s}) / p^{s p^s} ≡ 1 mod p for 1 ≤ s < depth.
#[derive(Clone, Debug, Serialize)]
pub struct McriReport {
    pub depth: u32,
    pub transitive_mod_p: CriterionVerdict,
    pub measure_preserving: CriterionVerdict,
    pub orbit: CriterionVerdict,
    pub product: CriterionVerdict,
    pub per_level: Vec<LevelProduct>,
    /// Π_{j<p} b_{j+p} mod p.
    pub product_first_level: String,
    /// Whether the per-level products agree for every s.
    pub s_independent: bool,
    /// When (1) and (4) hold, whether (2) held as well; `None` otherwise.
    pub mp_implied: Option<bool>,
}

impl McriReport {
    pub fn all_pass(&self) -> bool {
        self.transitive_mod_p.pass && self.measure_preserving.pass && self.orbit.pass && self.product.pass
    }
}

pub fn mcri_conditions(f: &PadicFunction, depth: u32) -> Result<McriReport> {
    if depth < 3 || depth > f.depth() {
        return Err(Error::Precondition(format!(
            "mcri_conditions needs 3 <= depth <= {}, got {depth}",
            f.depth()
        )));
    }
    let f = f.with_depth(depth)?;
    let ud1 = ud1_check(&f, default_s_max(&f))?;
    if !ud1.verdict.pass {
        return Err(Error::NotUd1(Box::new(ud1.verdict)));
    }
    let p = f.prime().get();
    let name = |c: &str| format!("mcri-{c}");

    let c1 = {
        let r = transitive_mod(&f, 1)?;
        if r.transitive {
            CriterionVerdict::pass(&name("1"), Some(1))
        } else {
            CriterionVerdict::fail(&name("1"), Some(1), "transitive-mod-p", Witness::new())
        }
    };

    let full = vdp_coefficients(&f, table_size(f.prime(), depth)?, depth)?;
    let mut c2 = measure_preserving_vdp(&full, depth)?;
    c2.criterion = name("2");

    let mut c3 = CriterionVerdict::pass(&name("3"), Some(depth));
    for s in 1..depth {
        let m = p.pow(s + 1);
        let mut x = 0;
        for _ in 0..p.pow(s) {
            x = f.eval_u64(x, s + 1)?;
        }
        if x % m == 0 {
            let w = Witness::new().with("s", s).with("iterate", x);
            c3 = CriterionVerdict::fail(&name("3"), Some(depth), "orbit-returns", w);
            break;
        }
    }

    let mut per_level = Vec::new();
    for s in 1..depth {
        let ps = p.pow(s);
        let b = full.reduce_to(s + 1)?;
        let mut acc = 1 % p;
        for j in 0..ps {
            let t = b.get((j + ps) as usize);
            if t % ps != 0 {
                return Err(Error::NotLipschitz(format!("B_{} is not divisible by p^{s}", j + ps)));
            }
            acc = small::mul(acc, t / ps % p, p);
        }
        per_level.push((s, acc));
    }
    let mut c4 = CriterionVerdict::pass(&name("4"), Some(depth));
    if let Some(&(s, v)) = per_level.iter().find(|(_, v)| *v != 1) {
        c4 = CriterionVerdict::fail(&name("4"), Some(depth), "product-one", Witness::new().with("s", s).with("value", v));
    }
    let first = (0..p).try_fold(1 % p, |acc, j| -> Result<u64> {
        Ok(small::mul(acc, full.normalized_mod((j + p) as usize, 1)?, p))
    })?;
    let s_independent = per_level.iter().all(|&(_, v)| v == per_level[0].1);
    let mp_implied = (c1.pass && c4.pass).then_some(c2.pass);

    Ok(McriReport {
        depth,
        transitive_mod_p: c1,
        measure_preserving: c2,
        orbit: c3,
        product: c4,
        per_level: per_level.into_iter().map(|(s, v)| LevelProduct { s, value: v.to_string() }).collect(),
        product_first_level: first.to_string(),
        s_independent,
        mp_implied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;

    fn poly(text: &str, prime: u64, depth: u32) -> PadicFunction {
        PadicFunction::parse_polynomial(text, Prime::new(prime).unwrap(), depth).unwrap()
    }

    #[test]
    fn translation_p3() {
        let r = mcri_conditions(&poly("x+1", 3, 4), 4).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.product_first_level, "1");
        assert!(r.s_independent);
        assert_eq!(r.mp_implied, Some(true));
    }

    #[test]
    fn counter_cubic_fails_orbit_at_s2() {
        let r = mcri_conditions(&poly("1+3*x+2*x^3", 2, 4), 4).unwrap();
        assert!(r.transitive_mod_p.pass);
        assert!(!r.orbit.pass);
        assert_eq!(r.orbit.witness.as_ref().unwrap().get("s"), Some("2"));
    }

    #[test]
    fn x5_plus_1_fails_orbit_at_s1() {
        let r = mcri_conditions(&poly("x^5+1", 5, 3), 3).unwrap();
        assert!(r.transitive_mod_p.pass);
        let w = r.orbit.witness.as_ref().unwrap();
        assert_eq!(w.get("s"), Some("1"));
    }

    #[test]
    fn preconditions() {
        assert!(mcri_conditions(&poly("x+1", 3, 2), 2).is_err());
        assert!(mcri_conditions(&poly("x+1", 3, 3), 4).is_err());
    }
}
