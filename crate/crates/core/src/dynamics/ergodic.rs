use serde::Serialize;

use super::cycles::{transitive_mod, CycleReport};
use crate::analysis::ud1_check;
use crate::arith::Prime;
use crate::error::{Error, Result};
use crate::funcspace::{lipschitz_check, Form, PadicFunction};
use crate::verdict::CriterionVerdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "mainR")]
    MainR,
    #[serde(rename = "closed-form")]
    ClosedForm,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Evidence {
    pub cycle_reports: Vec<CycleReport>,
    pub verdicts: Vec<CriterionVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgodicityDecision {
    pub ergodic: bool,
    pub method: Method,
    pub mu: u32,
    pub evidence: Evidence,
}

/// Level at which transitivity certifies ergodicity of a UD1 1-Lipschitz
/// function: 3 for p ∈ {2, 3}, 2 for p ≥ 5.
pub fn mu(p: Prime) -> u32 {
    if p.get() <= 3 {
        3
    } else {
        2
    }
}

/// Decides ergodicity of a UD1 1-Lipschitz f from transitivity mod p^μ.
pub fn ergodic_ud(f: &PadicFunction) -> Result<ErgodicityDecision> {
    ergodic_ud_with_mu(f, mu(f.prime()))
}

/// The same decision at an arbitrary level. Only levels ≥ μ(p) are sound;
/// smaller ones exist to reproduce counterexamples.
#[doc(hidden)]
pub fn ergodic_ud_with_mu(f: &PadicFunction, level: u32) -> Result<ErgodicityDecision> {
    let depth = f.depth();
    if depth < 2 || depth < level {
        return Err(Error::Precondition(format!(
            "the decision needs depth >= max(2, {level}), the function has depth {depth}"
        )));
    }
    let mut verdicts = Vec::new();
    if !matches!(f.form(), Form::Polynomial(_)) {
        let lip = lipschitz_check(f)?;
        if !lip.pass {
            return Err(Error::NotLipschitz(lip.summary()));
        }
        verdicts.push(lip);
    }
    let ud1 = ud1_check(f, depth - 1)?;
    if !ud1.verdict.pass {
        return Err(Error::NotUd1(Box::new(ud1.verdict)));
    }
    verdicts.push(ud1.verdict);
    let report = transitive_mod(f, level)?;
    Ok(ErgodicityDecision {
        ergodic: report.transitive,
        method: Method::MainR,
        mu: level,
        evidence: Evidence { cycle_reports: vec![report], verdicts },
    })
}

/// Transitivity at every level up to `depth`, by brute force.
pub fn ergodic_oracle(f: &PadicFunction, depth: u32) -> Result<ErgodicityDecision> {
    let mut reports = Vec::new();
    let mut ergodic = true;
    for n in 1..=depth {
        let r = transitive_mod(f, n)?;
        ergodic &= r.transitive;
        reports.push(r);
        if !ergodic {
            break;
        }
    }
    Ok(ErgodicityDecision {
        ergodic,
        method: Method::Oracle,
        mu: depth,
        evidence: Evidence { cycle_reports: reports, verdicts: Vec::new() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str, prime: u64, depth: u32) -> PadicFunction {
        PadicFunction::parse_polynomial(text, Prime::new(prime).unwrap(), depth).unwrap()
    }

    #[test]
    fn mu_values() {
        let m: Vec<u32> = [2, 3, 5, 7, 11].iter().map(|&p| mu(Prime::new(p).unwrap())).collect();
        assert_eq!(m, vec![3, 3, 2, 2, 2]);
    }

    #[test]
    fn examples() {
        let d = ergodic_ud(&poly("x+1", 2, 4)).unwrap();
        assert!(d.ergodic);
        assert_eq!((d.method, d.mu), (Method::MainR, 3));
        assert_eq!(d.evidence.cycle_reports[0].exponent, 3);

        let g = poly("1+4*x+4*x^3+2*x^5", 3, 4);
        assert!(!ergodic_ud(&g).unwrap().ergodic);
        // Stopping at level 2 would wrongly accept it.
        assert!(ergodic_ud_with_mu(&g, 2).unwrap().ergodic);

        let h = poly("x^5+1", 5, 3);
        let d = ergodic_ud(&h).unwrap();
        assert!(!d.ergodic);
        assert_eq!(d.mu, 2);
    }

    #[test]
    fn oracle_stops_at_first_failure() {
        let d = ergodic_oracle(&poly("1+3*x+2*x^3", 2, 4), 4).unwrap();
        assert!(!d.ergodic);
        assert_eq!(d.evidence.cycle_reports.len(), 3);
    }

    #[test]
    fn shallow_functions_are_refused() {
        assert!(ergodic_ud(&poly("x+1", 2, 2)).is_err());
    }
}
