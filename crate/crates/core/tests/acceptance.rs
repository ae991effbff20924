//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are printed even when everything passes.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_dyn::analysis::{mahler_ud1_predicate, ud1_check};
use padic_dyn::arith::{floor_log, leading_digit, valuation_int, Prime};
use padic_dyn::cli::{enumerate_cubic_mod8, enumerate_deg8_mod27, Criterion};
use padic_dyn::criteria::{
    deg8_minimal_p3, lifted_orbit_value, mahler_ergodic_p3, mahler_to_power_mod_p2, mainp5_linear_form,
    p3_mahler_inputs, p3_vdp_inputs, p5_generate, random_instance, random_lift, vdp_ergodic_p3, verify_identity_suite,
    ErgbmVariant, Suite,
};
use padic_dyn::dynamics::{ergodic_ud_with_mu, mcri_conditions, mu, transitive_mod};
use padic_dyn::funcspace::{
    basis_change_anm, mahler_coefficients, mahler_to_vdp, vdp_to_mahler, CoefficientSeries, IntPolynomial,
    PadicFunction, SeriesKind,
};
use padic_dyn::Result;

const CUBIC_BUDGET: Duration = Duration::from_secs(5);
const DEG8_BUDGET: Duration = Duration::from_secs(60);
const ABC_BUDGET: Duration = Duration::from_secs(30);
const DEG8_SAMPLES: u64 = 10_000;
const MAINR_PER_PRIME: usize = 1000;
const MCOP_SUFFICIENCY: usize = 500;
const GENERATOR_PASSES: usize = 100;

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn poly(text: &str, p: u64, depth: u32) -> PadicFunction {
    PadicFunction::parse_polynomial(text, pr(p), depth).unwrap()
}

/// Exponent e with p^e | a_m required by 1-Lipschitz plus UD1 at index m.
fn ud1_exponent(m: u64, p: Prime) -> u32 {
    if m < p.get() {
        return 0;
    }
    let (lead, s) = leading_digit(m, p);
    let strict = if p.get() == 2 { s >= 2 } else { lead >= 2 || s >= 2 };
    if strict {
        s + 1
    } else {
        floor_log(m, p)
    }
}

/// Mahler coefficients a_0..a_{p-1} (mod p^depth) of a map whose reduction
/// mod p is `perm`, with random higher digits.
fn head_coefficients(perm: &[u64], depth: u32, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let p = perm.len() as u64;
    let table = PadicFunction::value_table(pr(p), 1, perm.to_vec()).unwrap();
    let low = mahler_coefficients(&table, p, 1).unwrap();
    let m = p.pow(depth);
    low.terms().iter().map(|&c| (c + p * rng.gen_range(0..m / p)) % m).collect()
}

/// A random Mahler series satisfying the UD1 divisibilities, nonzero below
/// `len`, reducing mod p to `perm`.
fn random_ud1_series(perm: &[u64], depth: u32, len: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let p = pr(perm.len() as u64);
    let m = p.get().pow(depth);
    let mut terms = head_coefficients(perm, depth, rng);
    for n in p.get()..len as u64 {
        let e = ud1_exponent(n, p);
        terms.push(if e >= depth { 0 } else { p.get().pow(e) * rng.gen_range(0..m / p.get().pow(e)) });
    }
    terms
}

fn mahler_function(p: u64, depth: u32, terms: Vec<u64>) -> PadicFunction {
    let s = CoefficientSeries::new(SeriesKind::Mahler, pr(p), depth, terms).unwrap();
    PadicFunction::from_series_finite(s, depth).unwrap()
}

fn random_cycle(p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut order: Vec<u64> = (1..p).collect();
    order.shuffle(rng);
    let mut map = vec![0u64; p as usize];
    let mut x = 0;
    for &y in &order {
        map[x as usize] = y;
        x = y;
    }
    map[x as usize] = 0;
    map
}

fn random_permutation(p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut v: Vec<u64> = (0..p).collect();
    v.shuffle(rng);
    v
}

type Outcome = Result<(bool, String)>;

fn criterion_1() -> Outcome {
    let listed = [
        "x+1", "x+3", "x+5", "x+7", "5*x+1", "5*x+3", "5*x+5", "5*x+7", "2*x^2+3*x+1", "2*x^2+3*x+3",
        "2*x^2+3*x+5", "2*x^2+3*x+7", "2*x^2+7*x+1", "2*x^2+7*x+3", "2*x^2+7*x+5", "2*x^2+7*x+7",
    ];
    let mut expected: Vec<Vec<u64>> = listed.iter().map(|t| poly(t, 2, 3).reduce(3).unwrap()).collect();
    expected.sort();
    expected.dedup();
    let t = Instant::now();
    let census = enumerate_cubic_mod8(Criterion::Oracle)?;
    let elapsed = t.elapsed();
    let got: Vec<Vec<u64>> = census.classes.iter().map(|c| c.map.clone()).collect();
    let ok = expected.len() == 16 && got == expected && elapsed < CUBIC_BUDGET;
    Ok((ok, format!("{} classes from {} cubics, equal to the listed 16: {}, {elapsed:.2?} (< 5 s)", got.len(), census.total, got == expected)))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut check = |name: String, f: PadicFunction, n: u32, cycle: Vec<u64>| -> Result<()> {
        let low = transitive_mod(&f, n)?;
        let high = transitive_mod(&f, n + 1)?;
        let good = low.transitive && low.cycle_of_zero() == Some(&cycle[..]) && !high.transitive;
        ok &= good;
        notes.push(format!("{name} {}", if good { "ok" } else { "MISMATCH" }));
        Ok(())
    };
    check("1+3x+2x^3".into(), poly("1+3*x+2*x^3", 2, 3), 2, vec![0, 1, 2, 3])?;
    check("1+4x+4x^3+2x^5".into(), poly("1+4*x+4*x^3+2*x^5", 3, 3), 2, vec![0, 1, 2, 6, 7, 5, 3, 4, 8])?;
    for p in [5u64, 7] {
        check(format!("x^{p}+1"), poly(&format!("x^{p}+1"), p, 2), 1, (0..p).collect())?;
    }
    Ok((ok, notes.join(", ")))
}

fn criterion_3() -> Outcome {
    let census = enumerate_cubic_mod8(Criterion::Oracle)?;
    let mut not_ud1 = 0;
    for n in 0..4096u64 {
        let c: Vec<i64> = (0..4).map(|i| ((n >> (3 * i)) & 7) as i64).collect();
        let f = PadicFunction::polynomial(IntPolynomial::from_i64s(&c), pr(2), 4)?;
        not_ud1 += !ud1_check(&f, 3)?.verdict.pass as u32;
    }
    let counts: Vec<String> = census.agreement.iter().map(|d| format!("{} {}", d.criterion, d.count)).collect();
    let ok = census.total == 4096 && census.disagreements() == 0 && not_ud1 == 0;
    Ok((ok, format!("disagreements over 4096 cubics: {}; non-UD1 cubics: {not_ud1}", counts.join(", "))))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let census = enumerate_deg8_mod27(DEG8_SAMPLES, 2024, 0)?;
    // The uniform sample is under 1% ergodic, so also draw polynomials
    // already transitive mod 9 and compare all three criteria there.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut enriched, mut ergodic, mut bad) = (0u32, 0u32, 0u32);
    while enriched < 2000 {
        let c: Vec<i64> = (0..9).map(|_| rng.gen_range(0..27)).collect();
        let f = PadicFunction::polynomial(IntPolynomial::from_i64s(&c), pr(3), 4)?;
        if !transitive_mod(&f, 2)?.transitive {
            continue;
        }
        enriched += 1;
        let oracle = transitive_mod(&f, 3)?.transitive;
        ergodic += oracle as u32;
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let deg8 = deg8_minimal_p3(&big)?.pass;
        let ergbm = mahler_ergodic_p3(&p3_mahler_inputs(&f)?, ErgbmVariant::configured())?.pass;
        let ergbm2 = vdp_ergodic_p3(&p3_vdp_inputs(&f)?)?.pass;
        bad += (deg8 != oracle || ergbm != oracle || ergbm2 != ergbm) as u32;
    }
    let elapsed = t.elapsed();
    let counts: Vec<String> = census.agreement.iter().map(|d| format!("{} {}", d.criterion, d.count)).collect();
    let ok = census.disagreements() == 0 && bad == 0 && elapsed < DEG8_BUDGET;
    Ok((
        ok,
        format!(
            "{} uniform samples ({} ergodic), disagreements: {}; {enriched} samples transitive mod 9 ({ergodic} ergodic), {bad} disagreements; {elapsed:.2?} (< 60 s)",
            census.total,
            census.ergodic,
            counts.join(", ")
        ),
    ))
}

/// A random polynomial in Z_p[x] of degree below `len`, written in the
/// Mahler basis (p^{v_p(m!)} | a_m), reducing mod p to `perm`.
fn random_polynomial_series(perm: &[u64], depth: u32, len: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let p = perm.len() as u64;
    let m = p.pow(depth);
    let mut terms = head_coefficients(perm, depth, rng);
    for n in p..len as u64 {
        let e = (1..).map(|i| n / p.pow(i)).take_while(|&q| q > 0).sum::<u64>() as u32;
        terms.push(if e >= depth { 0 } else { p.pow(e) * rng.gen_range(0..m / p.pow(e)) });
    }
    terms
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let level = mu(pr(p));
        let depth = level + 2;
        let len = (3 * p).max(8) as usize;
        let (mut accepted, mut drawn, mut broken, mut not_ud1) = (0usize, 0u64, 0u32, 0u32);
        while accepted < MAINR_PER_PRIME && drawn < 1_000_000 {
            drawn += 1;
            let cycle = random_cycle(p, &mut rng);
            let f = mahler_function(p, depth, random_polynomial_series(&cycle, depth, len, &mut rng));
            if !transitive_mod(&f, level)?.transitive {
                continue;
            }
            accepted += 1;
            not_ud1 += !ud1_check(&f, depth - 1)?.verdict.pass as u32;
            let lifted = transitive_mod(&f, level + 1)?.transitive && transitive_mod(&f, level + 2)?.transitive;
            broken += !lifted as u32;
        }
        ok &= accepted >= MAINR_PER_PRIME && broken == 0 && not_ud1 == 0;
        notes.push(format!(
            "p={p}: {accepted} polynomials transitive mod p^{level}, {broken} fail mod p^{} or p^{}",
            level + 1,
            level + 2
        ));
    }
    // Stopping at 9 for p = 3 accepts a map that is not transitive mod 27.
    let g = poly("1+4*x+4*x^3+2*x^5", 3, 3);
    let falsified = ergodic_ud_with_mu(&g, 2)?.ergodic && !transitive_mod(&g, 3)?.transitive;
    ok &= falsified;
    notes.push(format!("mu=2 at p=3 falsified: {falsified}"));

    // Informational: UD1 Mahler series that are not polynomials can stop
    // lifting after level mu. Not part of the verdict.
    let (mut seen, mut stuck) = (0u32, 0u32);
    while seen < 200 {
        let f = mahler_function(2, 5, random_ud1_series(&random_cycle(2, &mut rng), 5, 8, &mut rng));
        if transitive_mod(&f, 3)?.transitive && ud1_check(&f, 4)?.verdict.pass {
            seen += 1;
            stuck += !transitive_mod(&f, 4)?.transitive as u32;
        }
    }
    notes.push(format!("non-polynomial UD1 series over Z_2: {stuck} of {seen} transitive mod 8 stop lifting"));
    Ok((ok, notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (suite, pmax, smax) in
        [(Suite::Abc, 97, 0), (Suite::Pzero, 97, 0), (Suite::Valpro, 13, 4), (Suite::Bipro, 13, 4), (Suite::Bip2, 2, 6)]
    {
        let t = Instant::now();
        let reports = verify_identity_suite(suite, pmax, smax)?;
        let elapsed = t.elapsed();
        let checked: u64 = reports.iter().map(|r| r.params_checked).sum();
        let failures: u64 = reports.iter().map(|r| r.failures).sum();
        ok &= failures == 0 && checked > 0 && (suite != Suite::Abc || elapsed < ABC_BUDGET);
        notes.push(format!("{} {checked} checked/{failures} counterexamples ({elapsed:.1?})", suite.name()));
    }
    Ok((ok, notes.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let depth = 4;
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u64, 3, 5] {
        let count = p.pow(depth);
        let mut necessity = 0;
        for _ in 0..100 {
            let deg = rng.gen_range(1..=12);
            let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50)).collect();
            let f = PadicFunction::polynomial(IntPolynomial::from_i64s(&c), pr(p), depth)?;
            necessity += !mahler_ud1_predicate(&mahler_coefficients(&f, count, depth)?)?.pass as u32;
        }
        let mut sufficiency = 0;
        for _ in 0..MCOP_SUFFICIENCY {
            let perm = random_permutation(p, &mut rng);
            let terms = random_ud1_series(&perm, depth, count as usize, &mut rng);
            let f = mahler_function(p, depth, terms);
            sufficiency += !ud1_check(&f, depth - 1)?.verdict.pass as u32;
        }
        // One coefficient below its UD1 valuation (but still 1-Lipschitz)
        // must be caught by the direct congruences.
        let candidates: Vec<u64> =
            (p..p.pow(3)).filter(|&n| ud1_exponent(n, pr(p)) > floor_log(n, pr(p))).collect();
        let mut missed = 0;
        for _ in 0..200 {
            let perm = random_permutation(p, &mut rng);
            let mut terms = random_ud1_series(&perm, depth, count as usize, &mut rng);
            let n = *candidates.choose(&mut rng).unwrap();
            let e = ud1_exponent(n, pr(p)) - 1;
            let unit = loop {
                let u = rng.gen_range(1..p.pow(depth - e));
                if u % p != 0 {
                    break u;
                }
            };
            terms[n as usize] = p.pow(e) * unit;
            let f = mahler_function(p, depth, terms);
            missed += ud1_check(&f, depth - 1)?.verdict.pass as u32;
        }
        ok &= necessity == 0 && sufficiency == 0 && missed == 0;
        notes.push(format!(
            "p={p}: 100 polynomials {necessity} violations, {MCOP_SUFFICIENCY} vectors {sufficiency} violations, 200 broken vectors {missed} missed"
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [5u64, 7] {
        let prime = pr(p);
        let (mut passed, mut failed, mut wrong, mut form_wrong) = (0usize, 0usize, 0u32, 0u32);
        while passed < GENERATOR_PASSES {
            let (cycle, bvec) = random_instance(prime, &mut rng);
            let g = p5_generate(prime, &cycle, &bvec, &random_lift(prime, &mut rng))?;
            let t2 = transitive_mod(&g.function, 2)?.transitive;
            let t3 = transitive_mod(&g.function, 3)?.transitive;
            if g.conditions.verdict.pass {
                passed += 1;
                wrong += !(t2 && t3) as u32;
            } else {
                failed += 1;
                wrong += t2 as u32;
            }
            let power = mahler_to_power_mod_p2(prime, &g.mahler_mod_p2)?;
            let g0: Vec<u64> = power.iter().map(|c| c % p).collect();
            let g1: Vec<u64> = power.iter().map(|c| c / p).collect();
            let l = mainp5_linear_form(prime, &g0, &g1)?;
            let y = lifted_orbit_value(prime, &g0, &g1);
            let direct = (0..p).try_fold(0, |x, _| g.function.eval_u64(x, 2))?;
            form_wrong += ((l == 0) != (y == 0) || y != direct || (l != 0) != g.conditions.verdict.pass) as u32;
        }
        ok &= wrong == 0 && form_wrong == 0 && failed > 0;
        notes.push(format!(
            "p={p}: {passed} pass / {failed} fail, {wrong} oracle disagreements, {form_wrong} linear-form mismatches"
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let depth = 3;
        let len = p.pow(if p <= 3 { 3 } else { 2 }) as usize;
        let (mut tested, mut drawn, mut differ) = (0u32, 0u32, 0u32);
        while tested < 200 && drawn < 100_000 {
            drawn += 1;
            let perm = random_permutation(p, &mut rng);
            let f = mahler_function(p, depth, random_ud1_series(&perm, depth, len, &mut rng));
            let r = mcri_conditions(&f, depth)?;
            if !r.measure_preserving.pass {
                continue;
            }
            tested += 1;
            let same = r.per_level.len() == 2
                && r.per_level.iter().all(|l| l.value == r.product_first_level)
                && r.s_independent;
            differ += !same as u32;
        }
        ok &= tested == 200 && differ == 0;
        notes.push(format!("p={p}: {tested} measure-preserving maps, {differ} with s=1, s=2 products differing"));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let k = 3;
    let mut mismatches = 0;
    let mut series_checked = 0;
    for p in [2u64, 3, 5] {
        let m = p.pow(k);
        for len in 1..=p.pow(3) as usize {
            for kind in [SeriesKind::Mahler, SeriesKind::VanDerPut] {
                let terms: Vec<u64> = (0..len).map(|_| rng.gen_range(0..m)).collect();
                let s = CoefficientSeries::new(kind, pr(p), k, terms)?;
                let back = match kind {
                    SeriesKind::Mahler => vdp_to_mahler(&mahler_to_vdp(&s, len)?, len)?,
                    SeriesKind::VanDerPut => mahler_to_vdp(&vdp_to_mahler(&s, len)?, len)?,
                };
                mismatches += (back != s) as u32;
                series_checked += 1;
            }
        }
    }
    let mut bound_violations = 0;
    let mut pairs = 0;
    for p in [2u64, 3, 5] {
        for n in 0..=200u64 {
            for m in 0..=n {
                let big_m = floor_log(m, pr(p)) + 1;
                let bound = (n as i64 - 1).div_euclid(p.pow(big_m) as i64 - 1);
                let v = valuation_int(&basis_change_anm(n, m, pr(p)), pr(p));
                pairs += 1;
                if !v.is_at_least(bound.max(0) as u64) {
                    bound_violations += 1;
                }
            }
        }
    }
    let ok = mismatches == 0 && bound_violations == 0;
    Ok((
        ok,
        format!("{series_checked} series round-tripped, {mismatches} mismatches; valuation bound on {pairs} pairs, {bound_violations} violations"),
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let t = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !pass as u32;
        println!("criterion {n:>2}: {} [{:.1?}] {detail}", if pass { "PASS" } else { "FAIL" }, t.elapsed());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
