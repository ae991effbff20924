use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Prime;
use crate::criteria::{
    deg8_minimal_p3, larin_transitive_mod8, mahler_ergodic_p2, mahler_ergodic_p3, mahler_to_power_mod_p2,
    mainp5_linear_form, p2_mahler_inputs, p2_vdp_inputs, p3_mahler_inputs, p3_vdp_inputs, p5_generate,
    random_lift, vdp_ergodic_p2, vdp_ergodic_p3, CubicCoeffs, ErgbmVariant, P5Generation,
};
use crate::dynamics::transitive_mod;
use crate::error::{Error, Result};
use crate::funcspace::{IntPolynomial, PadicFunction};

use super::{emit, Criterion, EXIT_FAIL, EXIT_PASS};

/// Maps mod 8 of x+d, 5x+d, 2x^2+3x+d and 2x^2+7x+d for odd d: the
/// classical list of ergodic cubic classes.
pub fn listed_cubic_classes() -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (a2, a1) in [(0u64, 1u64), (0, 5), (2, 3), (2, 7)] {
        for d in [1u64, 3, 5, 7] {
            out.push((0..8).map(|x| (a2 * x * x + a1 * x + d) % 8).collect());
        }
    }
    out.sort();
    out
}

/// "a3*x^3+..." with zero terms dropped.
fn poly_text(coeffs: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        parts.push(match i {
            0 => c.to_string(),
            1 => format!("{c}*x"),
            _ => format!("{c}*x^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicClass {
    #[serde(serialize_with = "crate::analysis::ud1::ser_decimal")]
    pub map: Vec<u64>,
    /// First cubic (in enumeration order) inducing the map.
    pub representative: String,
    pub members: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Disagreements {
    pub criterion: String,
    pub count: u64,
    /// First disagreeing input.
    pub example: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub family: String,
    pub criterion: String,
    pub total: u64,
    pub accepted: u64,
    pub classes: Vec<CubicClass>,
    /// Whether the accepted classes are exactly the listed sixteen.
    pub matches_listed: bool,
    pub agreement: Vec<Disagreements>,
}

impl Census {
    pub fn disagreements(&self) -> u64 {
        self.agreement.iter().map(|d| d.count).sum()
    }

    pub fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(
            out,
            "{}: {} of {} cubics accepted by {}, {} map classes",
            self.family,
            self.accepted,
            self.total,
            self.criterion,
            self.classes.len()
        )?;
        for c in &self.classes {
            let map: Vec<String> = c.map.iter().map(u64::to_string).collect();
            writeln!(out, "  [{}] {} ({} cubics)", map.join(","), c.representative, c.members)?;
        }
        writeln!(out, "matches the listed 16 classes: {}", if self.matches_listed { "yes" } else { "no" })?;
        write_agreement(out, &self.agreement)
    }
}

fn write_agreement(out: &mut dyn Write, rows: &[Disagreements]) -> Result<()> {
    for d in rows {
        write!(out, "{} vs oracle: {} disagreements", d.criterion, d.count)?;
        if let Some(e) = &d.example {
            write!(out, " (first: {e})")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn tally(name: &str, rows: impl Iterator<Item = (bool, String)>) -> Disagreements {
    let mut count = 0;
    let mut example = None;
    for (bad, text) in rows {
        if bad {
            count += 1;
            example.get_or_insert(text);
        }
    }
    Disagreements { criterion: name.into(), count, example }
}

struct CubicRow {
    coeffs: [i64; 4],
    map: Vec<u64>,
    oracle: bool,
    larin: bool,
    mahler: bool,
    vdp: bool,
}

fn cubic_row(n: u64) -> Result<CubicRow> {
    let two = Prime::new(2)?;
    let coeffs = [(n & 7) as i64, ((n >> 3) & 7) as i64, ((n >> 6) & 7) as i64, ((n >> 9) & 7) as i64];
    let f = PadicFunction::polynomial(IntPolynomial::from_i64s(&coeffs), two, 3)?;
    let report = transitive_mod(&f, 3)?;
    let larin = larin_transitive_mod8(&CubicCoeffs::new(coeffs[3], coeffs[2], coeffs[1], coeffs[0])).pass;
    let mahler = mahler_ergodic_p2(&p2_mahler_inputs(&f)?)?.pass;
    let vdp = vdp_ergodic_p2(&p2_vdp_inputs(&f)?)?.pass;
    Ok(CubicRow { coeffs, map: f.reduce(3)?, oracle: report.transitive, larin, mahler, vdp })
}

/// All 4096 cubics with coefficients in [0, 8), classified by transitivity
/// mod 8 and by the three closed-form criteria.
pub fn enumerate_cubic_mod8(criterion: Criterion) -> Result<Census> {
    let rows: Vec<CubicRow> = (0..4096u64).into_par_iter().map(cubic_row).collect::<Result<_>>()?;
    let selected = |r: &CubicRow| match criterion {
        Criterion::Oracle => r.oracle,
        Criterion::Mahler => r.mahler,
        Criterion::Vdp => r.vdp,
        Criterion::Larin => r.larin,
    };
    let mut classes: BTreeMap<Vec<u64>, CubicClass> = BTreeMap::new();
    let mut accepted = 0;
    for r in rows.iter().filter(|r| selected(r)) {
        accepted += 1;
        classes
            .entry(r.map.clone())
            .or_insert_with(|| CubicClass { map: r.map.clone(), representative: poly_text(&r.coeffs), members: 0 })
            .members += 1;
    }
    let keys: Vec<Vec<u64>> = classes.keys().cloned().collect();
    let agreement = [("larin", 0), ("mahler", 1), ("vdp", 2)]
        .iter()
        .map(|&(name, which)| {
            tally(
                name,
                rows.iter().map(|r| {
                    let v = [r.larin, r.mahler, r.vdp][which];
                    (v != r.oracle, poly_text(&r.coeffs))
                }),
            )
        })
        .collect();
    Ok(Census {
        family: "cubic-mod8".into(),
        criterion: format!("{criterion:?}").to_lowercase(),
        total: rows.len() as u64,
        accepted,
        classes: classes.into_values().collect(),
        matches_listed: keys == listed_cubic_classes(),
        agreement,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Deg8Census {
    pub family: String,
    pub seed: u64,
    pub total: u64,
    pub ergodic: u64,
    /// Some ergodic samples.
    pub examples: Vec<String>,
    pub agreement: Vec<Disagreements>,
}

impl Deg8Census {
    pub fn disagreements(&self) -> u64 {
        self.agreement.iter().map(|d| d.count).sum()
    }

    pub fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(
            out,
            "{}: {} of {} sampled polynomials ergodic (seed {})",
            self.family, self.ergodic, self.total, self.seed
        )?;
        for e in &self.examples {
            writeln!(out, "  {e}")?;
        }
        write_agreement(out, &self.agreement)
    }
}

struct Deg8Row {
    text: String,
    oracle: bool,
    deg8: bool,
    ergbm: bool,
    ergbm2: bool,
}

fn deg8_row(coeffs: &[i64]) -> Result<Deg8Row> {
    let three = Prime::new(3)?;
    let f = PadicFunction::polynomial(IntPolynomial::from_i64s(coeffs), three, 4)?;
    let oracle = transitive_mod(&f, 3)?.transitive;
    let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    Ok(Deg8Row {
        text: poly_text(coeffs),
        oracle,
        deg8: deg8_minimal_p3(&big)?.pass,
        ergbm: mahler_ergodic_p3(&p3_mahler_inputs(&f)?, ErgbmVariant::configured())?.pass,
        ergbm2: vdp_ergodic_p3(&p3_vdp_inputs(&f)?)?.pass,
    })
}

/// Uniform polynomials of degree at most 8 with coefficients in [0, 27),
/// checked against transitivity mod 27.
pub fn enumerate_deg8_mod27(sample: u64, seed: u64, show: usize) -> Result<Deg8Census> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<i64>> = (0..sample).map(|_| (0..9).map(|_| rng.gen_range(0..27)).collect()).collect();
    let rows: Vec<Deg8Row> = inputs.par_iter().map(|c| deg8_row(c)).collect::<Result<_>>()?;
    let ergodic: Vec<&Deg8Row> = rows.iter().filter(|r| r.oracle).collect();
    let agreement = vec![
        tally("deg8", rows.iter().map(|r| (r.deg8 != r.oracle, r.text.clone()))),
        tally("ergbm", rows.iter().map(|r| (r.ergbm != r.oracle, r.text.clone()))),
        tally("ergbm2", rows.iter().map(|r| (r.ergbm2 != r.oracle, r.text.clone()))),
    ];
    Ok(Deg8Census {
        family: "deg8-mod27".into(),
        seed,
        total: rows.len() as u64,
        ergodic: ergodic.len() as u64,
        examples: ergodic.iter().take(show).map(|r| r.text.clone()).collect(),
        agreement,
    })
}

pub enum LiftChoice {
    /// One lift; missing digits are zero.
    Fixed(Vec<u64>),
    Random { count: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedMap {
    #[serde(flatten)]
    pub generation: P5Generation,
    pub transitive_mod_p2: bool,
    pub transitive_mod_p3: bool,
    /// The linear form in the second digits, evaluated on this map.
    pub linear_form: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerateReport {
    pub prime: u64,
    pub maps: Vec<GeneratedMap>,
    pub passed: u64,
    pub failed: u64,
    pub inconsistent: u64,
}

fn confirm(prime: Prime, generation: P5Generation) -> Result<GeneratedMap> {
    let q = prime.get();
    let pass = generation.conditions.verdict.pass;
    let t2 = transitive_mod(&generation.function, 2)?.transitive;
    let t3 = transitive_mod(&generation.function, 3)?.transitive;
    let power = mahler_to_power_mod_p2(prime, &generation.mahler_mod_p2)?;
    let g0: Vec<u64> = power.iter().map(|c| c % q).collect();
    let g1: Vec<u64> = power.iter().map(|c| c / q).collect();
    let l = mainp5_linear_form(prime, &g0, &g1)?;
    let consistent = pass == t2 && (!pass || t3) && (l != 0) == pass;
    Ok(GeneratedMap {
        generation,
        transitive_mod_p2: t2,
        transitive_mod_p3: t3,
        linear_form: l.to_string(),
        consistent,
    })
}

/// Runs the construction for each lift and confirms every result by brute
/// force mod p^2 and p^3.
pub fn generate_maps(prime: Prime, cycle: &[u64], bvec: &[u64], lifts: &LiftChoice) -> Result<GenerateReport> {
    let lift_list: Vec<Vec<u64>> = match lifts {
        LiftChoice::Fixed(z) => vec![z.clone()],
        LiftChoice::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| random_lift(prime, &mut rng)).collect()
        }
    };
    // Validates φ and bvec once before fanning out.
    p5_generate(prime, cycle, bvec, &[])?;
    let maps: Vec<GeneratedMap> = lift_list
        .par_iter()
        .map(|z| confirm(prime, p5_generate(prime, cycle, bvec, z)?))
        .collect::<Result<_>>()?;
    let passed = maps.iter().filter(|m| m.generation.conditions.verdict.pass).count() as u64;
    let inconsistent = maps.iter().filter(|m| !m.consistent).count() as u64;
    Ok(GenerateReport { prime: prime.get(), passed, failed: maps.len() as u64 - passed, inconsistent, maps })
}

pub fn generate(
    prime: Prime,
    cycle: &[u64],
    bvec: &[u64],
    lifts: LiftChoice,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = generate_maps(prime, cycle, bvec, &lifts)?;
    if json {
        emit(out, &report)?;
    } else {
        for m in &report.maps {
            let g = &m.generation;
            let a: Vec<String> = g.mahler_mod_p2.iter().map(u64::to_string).collect();
            let z: Vec<String> = g.instance.lift.iter().map(u64::to_string).collect();
            writeln!(out, "lift [{}]", z.join(","))?;
            writeln!(out, "  mahler mod p^2: [{}]", a.join(","))?;
            writeln!(out, "  {}", g.conditions.verdict.summary())?;
            writeln!(
                out,
                "  oracle: transitive mod p^2 {}, mod p^3 {}; linear form {}",
                m.transitive_mod_p2, m.transitive_mod_p3, m.linear_form
            )?;
        }
        writeln!(
            out,
            "{} generated, {} pass, {} fail, {} inconsistent with the oracle",
            report.maps.len(),
            report.passed,
            report.failed,
            report.inconsistent
        )?;
    }
    if report.inconsistent > 0 {
        return Err(Error::Invariant(format!("{} generated maps disagree with the oracle", report.inconsistent)));
    }
    Ok(match lifts {
        LiftChoice::Fixed(_) if report.failed > 0 => EXIT_FAIL,
        _ => EXIT_PASS,
    })
}
