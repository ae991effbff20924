use std::io::Write;

use serde::Serialize;

use crate::analysis::{default_s_max, ud1_check};
use crate::criteria::{
    deg8_minimal_p3, ergp5_conditions, larin_transitive_mod8, mahler_ergodic_p2, mahler_ergodic_p3,
    p2_mahler_inputs, p2_vdp_inputs, p3_mahler_inputs, p3_vdp_inputs, vdp_ergodic_p2, vdp_ergodic_p3, CubicCoeffs,
    ErgbmVariant,
};
use crate::dynamics::{
    ergodic_oracle, ergodic_ud, mcri_conditions, mu, measure_preserving_ud_odd, measure_preserving_ud_p2, transitive_mod,
    ErgodicityDecision, McriReport,
};
use crate::error::{Error, Result};
use crate::funcspace::{lipschitz_check, Form, PadicFunction};
use crate::verdict::CriterionVerdict;

use super::{EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

#[derive(Clone, Debug, Serialize)]
pub struct LevelStatus {
    pub n: u32,
    pub bijective: bool,
    pub transitive: bool,
    /// Orbit of 0 when it has at most 32 points.
    pub cycle_of_zero: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub function: String,
    pub prime: String,
    pub depth: u32,
    /// Lipschitz, UD1 and measure-preservation verdicts, in order.
    pub chain: Vec<CriterionVerdict>,
    pub levels: Vec<LevelStatus>,
    pub decision: Option<ErgodicityDecision>,
    /// Prime-specific criteria; each must agree with the decision.
    pub closed_form: Vec<CriterionVerdict>,
    pub mcri: Option<McriReport>,
    pub ergodic: Option<bool>,
    pub exit_code: i32,
    pub note: Option<String>,
}

impl ClassifyReport {
    pub fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "function {} over Z_{} at depth {}", self.function, self.prime, self.depth)?;
        for v in &self.chain {
            writeln!(out, "  {}", v.summary())?;
        }
        for l in &self.levels {
            let state = if l.transitive {
                "transitive"
            } else if l.bijective {
                "bijective, not transitive"
            } else {
                "not bijective"
            };
            write!(out, "  mod {}^{}: {state}", self.prime, l.n)?;
            if let Some(c) = &l.cycle_of_zero {
                write!(out, " ({})", c.join(" "))?;
            }
            writeln!(out)?;
        }
        for v in &self.closed_form {
            writeln!(out, "  {}", v.summary())?;
        }
        if let Some(m) = &self.mcri {
            writeln!(
                out,
                "  mcri: {} (level products {})",
                if m.all_pass() { "pass" } else { "fail" },
                m.per_level.iter().map(|l| l.value.as_str()).collect::<Vec<_>>().join(",")
            )?;
        }
        if let Some(note) = &self.note {
            writeln!(out, "  note: {note}")?;
        }
        match (&self.decision, self.ergodic) {
            (Some(d), Some(e)) => {
                writeln!(out, "{} (transitivity mod p^{})", if e { "ergodic" } else { "not ergodic" }, d.mu)?
            }
            _ => writeln!(out, "undecided")?,
        }
        Ok(())
    }
}

fn levels(f: &PadicFunction) -> Result<Vec<LevelStatus>> {
    (1..=f.depth())
        .map(|n| {
            let r = transitive_mod(f, n)?;
            let cycle = r
                .cycle_of_zero()
                .filter(|c| r.bijective && c.len() <= 32)
                .map(|c| c.iter().map(u64::to_string).collect());
            Ok(LevelStatus { n, bijective: r.bijective, transitive: r.transitive, cycle_of_zero: cycle })
        })
        .collect()
}

/// Closed-form criteria available for this prime and form.
fn closed_form(f: &PadicFunction) -> Result<Vec<CriterionVerdict>> {
    let p = f.prime().get();
    let poly = match f.form() {
        Form::Polynomial(q) => Some(q),
        _ => None,
    };
    let mut out = Vec::new();
    match p {
        2 if f.depth() >= 3 => {
            out.push(mahler_ergodic_p2(&p2_mahler_inputs(f)?)?);
            out.push(vdp_ergodic_p2(&p2_vdp_inputs(f)?)?);
            if let Some(q) = poly.filter(|q| q.degree() <= 3) {
                let c = q.coeffs();
                let get = |i: usize| c.get(i).cloned().unwrap_or_default();
                out.push(larin_transitive_mod8(&CubicCoeffs { a: get(3), b: get(2), c: get(1), d: get(0) }));
            }
        }
        3 => {
            if f.depth() >= 4 {
                out.push(mahler_ergodic_p3(&p3_mahler_inputs(f)?, ErgbmVariant::configured())?);
            }
            if f.depth() >= 3 {
                out.push(vdp_ergodic_p3(&p3_vdp_inputs(f)?)?);
                if let Some(q) = poly.filter(|q| q.degree() <= 8) {
                    out.push(deg8_minimal_p3(q.coeffs())?);
                }
            }
        }
        p if p >= 5 && f.depth() >= 2 => out.push(ergp5_conditions(f)?.verdict),
        _ => {}
    }
    Ok(out)
}

/// Runs the verdict chain. Refusals (not 1-Lipschitz, not UD1) give exit
/// code 2 with the failing verdict in the chain; disagreements between
/// routes are errors.
pub fn classify(f: &PadicFunction, label: &str) -> Result<ClassifyReport> {
    let mut report = ClassifyReport {
        function: label.to_string(),
        prime: f.prime().to_string(),
        depth: f.depth(),
        chain: Vec::new(),
        levels: Vec::new(),
        decision: None,
        closed_form: Vec::new(),
        mcri: None,
        ergodic: None,
        exit_code: EXIT_USAGE,
        note: None,
    };
    let lip = lipschitz_check(f)?;
    let lip_pass = lip.pass;
    report.chain.push(lip);
    if !lip_pass {
        report.note = Some("not 1-Lipschitz; reductions mod p^n are not well defined".into());
        return Ok(report);
    }
    report.levels = levels(f)?;
    if f.depth() < 2 {
        report.note = Some("depth 1 cannot test uniform differentiability".into());
        return Ok(report);
    }
    let ud1 = ud1_check(f, default_s_max(f))?;
    let ud1_pass = ud1.verdict.pass;
    report.chain.push(ud1.verdict);
    if !ud1_pass {
        report.note = Some("not uniformly differentiable modulo p; the criteria do not apply".into());
        return Ok(report);
    }
    let mp = if f.prime().get() == 2 { measure_preserving_ud_p2(f)? } else { measure_preserving_ud_odd(f)? };
    let top = report.levels.last().expect("depth >= 1");
    if mp.pass != top.bijective {
        return Err(Error::Invariant(format!(
            "measure-preservation verdict {} disagrees with bijectivity mod p^{}",
            mp.pass, top.n
        )));
    }
    report.chain.push(mp);
    if f.depth() < mu(f.prime()) {
        report.note = Some(format!("depth below {} cannot certify ergodicity", mu(f.prime())));
        return Ok(report);
    }
    let mut decision = ergodic_ud(f)?;
    report.closed_form = closed_form(f)?;
    if decision.ergodic && report.levels.iter().any(|l| !l.transitive) {
        // The level-mu certificate is only established for polynomials; a
        // general UD1 series can be transitive mod p^mu and fail above it.
        if matches!(f.form(), Form::Polynomial(_)) {
            return Err(Error::Invariant("certified ergodic but not transitive at a checked level".into()));
        }
        let lost = report.levels.iter().find(|l| !l.transitive).map_or(0, |l| l.n);
        report.note = Some(format!(
            "transitive mod p^{} but not mod p^{lost}; decided by brute force, closed forms not applicable",
            decision.mu
        ));
        decision = ergodic_oracle(f, f.depth())?;
    } else {
        for v in &report.closed_form {
            if v.pass != decision.ergodic {
                return Err(Error::Invariant(format!("{} disagrees with the transitivity decision", v.summary())));
            }
        }
    }
    let ergodic = decision.ergodic;
    if f.depth() >= 3 {
        let m = mcri_conditions(f, f.depth())?;
        if m.all_pass() != ergodic {
            return Err(Error::Invariant("the four orbit conditions disagree with the decision".into()));
        }
        report.mcri = Some(m);
    }
    report.decision = Some(decision);
    report.ergodic = Some(ergodic);
    report.exit_code = if ergodic { EXIT_PASS } else { EXIT_FAIL };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;
    use crate::funcspace::{CoefficientSeries, SeriesKind};

    fn classify_text(p: u64, text: &str) -> ClassifyReport {
        let prime = Prime::new(p).unwrap();
        let f = PadicFunction::parse_polynomial(text, prime, crate::funcspace::default_depth(prime)).unwrap();
        classify(&f, text).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(classify_text(2, "x+1").exit_code, EXIT_PASS);
        let r = classify_text(3, "1+4*x+4*x^3+2*x^5");
        assert_eq!(r.exit_code, EXIT_FAIL);
        assert!(r.levels[1].transitive && !r.levels[2].transitive);
        assert_eq!(classify_text(5, "x^5+1").exit_code, EXIT_FAIL);
        assert_eq!(classify_text(7, "x+1").exit_code, EXIT_PASS);
    }

    #[test]
    fn non_polynomial_series_that_stops_lifting() {
        // UD1 with N_1 = 1, transitive mod 8 but not mod 16
        let prime = Prime::new(2).unwrap();
        let s = CoefficientSeries::from_i64s(SeriesKind::Mahler, prime, 5, &[17, 1, 24, 8, 8, 24, 0, 24]).unwrap();
        let f = PadicFunction::from_series_finite(s, 5).unwrap();
        let r = classify(&f, "mahler").unwrap();
        assert!(r.levels[2].transitive && !r.levels[3].transitive);
        assert_eq!(r.ergodic, Some(false));
        assert_eq!(r.exit_code, EXIT_FAIL);
        assert!(r.note.as_deref().unwrap().contains("not mod p^4"));
    }

    #[test]
    fn non_ud1_is_refused() {
        // a_4 = 4 is 1-Lipschitz, but UD1 needs 2^3 | a_4
        let prime = Prime::new(2).unwrap();
        let s = CoefficientSeries::from_i64s(SeriesKind::Mahler, prime, 4, &[1, 1, 0, 0, 4]).unwrap();
        let f = PadicFunction::from_series_finite(s, 4).unwrap();
        let r = classify(&f, "mahler").unwrap();
        assert_eq!(r.exit_code, EXIT_USAGE, "{:?}", r.chain);
        assert_eq!((r.chain[1].criterion.as_str(), r.chain[1].pass), ("ud1", false));
        assert!(r.ergodic.is_none());
    }
}
