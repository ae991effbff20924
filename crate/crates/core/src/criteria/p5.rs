use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::analysis::ud1::ser_decimal;
use crate::arith::{lucas_u64, small, solve_fp, FpMatrix, Prime, SolveOutcome};
use crate::dynamics::{lambda, transitive_mod};
use crate::error::{Error, Result};
use crate::funcspace::{vdp_coefficients, CoefficientSeries, PadicFunction, SeriesKind};
use crate::verdict::{CriterionVerdict, Witness};

pub const ERGP5: &str = "ergp5";

fn require_p5(p: Prime) -> Result<u64> {
    let q = p.get();
    if q < 5 {
        return Err(Error::Domain(format!("needs p >= 5, got {q}")));
    }
    // Tables of size p^3 back the oracle checks.
    crate::funcspace::table_size(p, 3)?;
    Ok(q)
}

/// Turns a cycle listing such as [0, 1, 2, 3, 4] into the map a ↦ φ(a).
pub fn cycle_to_map(p: Prime, cycle: &[u64]) -> Result<Vec<u64>> {
    let q = p.get();
    if cycle.len() as u64 != q {
        return Err(Error::Precondition(format!("phi must list all {q} residues, got {}", cycle.len())));
    }
    let mut map = vec![u64::MAX; q as usize];
    for (i, &a) in cycle.iter().enumerate() {
        if a >= q || map[a as usize] != u64::MAX {
            return Err(Error::Precondition(format!("phi is not a permutation of 0..{q}: entry {a}")));
        }
        map[a as usize] = cycle[(i + 1) % cycle.len()];
    }
    Ok(map)
}

fn check_bvec(p: u64, bvec: &[u64]) -> Result<()> {
    if bvec.len() as u64 != p {
        return Err(Error::Precondition(format!("bvec needs {p} entries, got {}", bvec.len())));
    }
    let mut prod = 1;
    for &b in bvec {
        if b % p == 0 {
            return Err(Error::Precondition("bvec entries must be nonzero mod p".into()));
        }
        prod = small::mul(prod, b % p, p);
    }
    if prod != 1 {
        return Err(Error::Precondition(format!("bvec product is {prod}, must be 1 mod p")));
    }
    Ok(())
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    u64::try_from(x.mod_floor(&BigInt::from(p))).expect("below p")
}

/// Results of the three conditions for a p ≥ 5 map: transitivity mod p,
/// Π_{i<p} b_{i+p} mod p, and f^p(0) mod p².
#[derive(Clone, Debug, Serialize)]
pub struct Ergp5Report {
    pub transitive_mod_p: bool,
    pub derivative_product: String,
    pub orbit_value: String,
    pub verdict: CriterionVerdict,
}

/// Evaluates the three-condition bundle on any 1-Lipschitz f of depth ≥ 2.
pub fn ergp5_conditions(f: &PadicFunction) -> Result<Ergp5Report> {
    let p = require_p5(f.prime())?;
    if f.depth() < 2 {
        return Err(Error::Precondition("needs depth >= 2".into()));
    }
    let transitive = transitive_mod(f, 1)?.transitive;
    let series = vdp_coefficients(f, 2 * p, 2)?;
    let mut product = 1;
    for i in 0..p {
        product = small::mul(product, series.normalized_mod((i + p) as usize, 1)?, p);
    }
    let table = f.reduce(2)?;
    let mut y = 0u64;
    for _ in 0..p {
        y = table[y as usize];
    }
    let depth = Some(2);
    let verdict = if !transitive {
        CriterionVerdict::fail(ERGP5, depth, "transitive-mod-p", Witness::new())
    } else if product != 1 {
        CriterionVerdict::fail(ERGP5, depth, "derivative-product", Witness::new().with("product", product))
    } else if y % p != 0 || y == 0 {
        CriterionVerdict::fail(ERGP5, depth, "orbit-valuation", Witness::new().with("f^p(0)", y))
    } else {
        CriterionVerdict::pass(ERGP5, depth)
    };
    Ok(Ergp5Report {
        transitive_mod_p: transitive,
        derivative_product: product.to_string(),
        orbit_value: y.to_string(),
        verdict,
    })
}

/// State of the three-step construction.
#[derive(Clone, Debug, Serialize)]
pub struct P5Instance {
    pub prime: u64,
    #[serde(serialize_with = "ser_decimal")]
    pub phi: Vec<u64>,
    #[serde(serialize_with = "ser_decimal")]
    pub bvec: Vec<u64>,
    /// First p-adic digits of c_0..c_{2p-1}.
    #[serde(serialize_with = "ser_decimal")]
    pub c: Vec<u64>,
    /// Second digits z_0..z_{2p-1}.
    #[serde(serialize_with = "ser_decimal")]
    pub lift: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct P5Generation {
    pub instance: P5Instance,
    /// Mahler coefficients a_0..a_{2p-1} modulo p^2.
    #[serde(serialize_with = "ser_decimal")]
    pub mahler_mod_p2: Vec<u64>,
    pub conditions: Ergp5Report,
    #[serde(skip)]
    pub function: PadicFunction,
}

/// Step 1: c_0..c_{p-1} mod p with Σ_{m≤a} C(a, m) c_m ≡ φ(a).
fn step1(p: Prime, phi: &[u64]) -> Vec<u64> {
    let q = p.get();
    let mut c = Vec::with_capacity(q as usize);
    for a in 0..q {
        let mut s = phi[a as usize];
        for m in 0..a {
            s = small::sub(s, small::mul(lucas_u64(a, m, p), c[m as usize], q), q);
        }
        c.push(s);
    }
    c
}

/// Step 2: c_p..c_{2p-1} mod p from b_{i+p} = Σ_n λ_n^i c_n + Σ_{n≤i} C(i, n) c_{n+p}.
fn step2(p: Prime, c: &[u64], bvec: &[u64]) -> Vec<u64> {
    let q = p.get();
    let mut upper: Vec<u64> = Vec::with_capacity(q as usize);
    for i in 0..q {
        let mut s = bvec[i as usize] % q;
        for n in 0..q {
            s = small::sub(s, small::mul(mod_p(&lambda(n, i, p), q), c[n as usize], q), q);
        }
        for n in 0..i {
            s = small::sub(s, small::mul(lucas_u64(i, n, p), upper[n as usize], q), q);
        }
        upper.push(s);
    }
    upper
}

/// Runs the construction for a cycle φ (listed as in [0, 1, 2, 3, 4]), the
/// constants b_p..b_{2p-1}, and second digits z (up to 2p of them; missing
/// ones are zero). The returned function has depth 3, with
/// a_m = e_m + p z_m for m < p and a_m = p (e_m + p z_m) for p ≤ m < 2p.
pub fn p5_generate(p: Prime, cycle: &[u64], bvec: &[u64], lift: &[u64]) -> Result<P5Generation> {
    let q = require_p5(p)?;
    let phi = cycle_to_map(p, cycle)?;
    check_bvec(q, bvec)?;
    if lift.len() as u64 > 2 * q {
        return Err(Error::Precondition(format!("at most {} lift digits", 2 * q)));
    }
    let mut z: Vec<u64> = lift.iter().map(|&d| d % q).collect();
    z.resize(2 * q as usize, 0);
    let mut c = step1(p, &phi);
    c.extend(step2(p, &c, bvec));
    let p3 = q * q * q;
    let terms: Vec<u64> = (0..2 * q as usize)
        .map(|m| {
            let digits = c[m] + q * z[m];
            if (m as u64) < q {
                digits
            } else {
                (q * digits) % p3
            }
        })
        .collect();
    let p2 = q * q;
    let mahler_mod_p2 = terms.iter().map(|t| t % p2).collect();
    let series = CoefficientSeries::new(SeriesKind::Mahler, p, 3, terms)?;
    let function = PadicFunction::from_series_finite(series, 3)?;
    let conditions = ergp5_conditions(&function)?;
    if !conditions.transitive_mod_p || conditions.derivative_product != "1" {
        return Err(Error::Invariant(format!(
            "steps 1-2 produced a map violating their own targets: {}",
            conditions.verdict.summary()
        )));
    }
    Ok(P5Generation {
        instance: P5Instance { prime: q, phi, bvec: bvec.iter().map(|b| b % q).collect(), c, lift: z },
        mahler_mod_p2,
        conditions,
        function,
    })
}

/// Uniform second digits for Step 3.
pub fn random_lift<R: Rng>(p: Prime, rng: &mut R) -> Vec<u64> {
    (0..2 * p.get()).map(|_| rng.gen_range(0..p.get())).collect()
}

/// A uniform p-cycle listed from 0, and constants with product 1.
pub fn random_instance<R: Rng>(p: Prime, rng: &mut R) -> (Vec<u64>, Vec<u64>) {
    let q = p.get();
    let mut rest: Vec<u64> = (1..q).collect();
    rest.shuffle(rng);
    let mut cycle = vec![0];
    cycle.extend(rest);
    let mut bvec: Vec<u64> = (0..q - 1).map(|_| rng.gen_range(1..q)).collect();
    let prod = bvec.iter().fold(1, |acc, &b| small::mul(acc, b, q));
    bvec.push(small::inv(prod, q).expect("nonzero mod p"));
    (cycle, bvec)
}

/// Power-basis coefficients mod p^2 of Σ a_m C(x, m) with m < 2p and
/// p | a_m for m ≥ p.
pub fn mahler_to_power_mod_p2(p: Prime, a: &[u64]) -> Result<Vec<u64>> {
    let q = p.get();
    let p2 = q * q;
    if a.len() as u64 > 2 * q {
        return Err(Error::Dimension(format!("at most {} Mahler terms", 2 * q)));
    }
    let mut out = vec![0u64; a.len().max(1)];
    // falling = x (x-1) ... (x-m+1) in the power basis, mod p^2
    let mut falling = vec![1u64];
    let mut unit_fact = 1u64; // m! with the factor p removed once m ≥ p
    for (m, &am) in a.iter().enumerate() {
        let m = m as u64;
        if m > 0 {
            let mut next = vec![0u64; falling.len() + 1];
            let shift = p2 - (m - 1) % p2;
            for (i, &f) in falling.iter().enumerate() {
                next[i + 1] = (next[i + 1] + f) % p2;
                next[i] = (next[i] + f * shift) % p2;
            }
            falling = next;
            let factor = if m == q { 1 } else { m % p2 };
            unit_fact = small::mul(unit_fact, factor, p2);
        }
        let scaled = if m < q {
            am % p2
        } else {
            if am % q != 0 {
                return Err(Error::NotExact { index: m as usize, required: 1 });
            }
            (am / q) % p2
        };
        let w = small::mul(scaled, small::inv(unit_fact, p2).expect("unit"), p2);
        for (i, &f) in falling.iter().enumerate() {
            if i >= out.len() {
                out.resize(i + 1, 0);
            }
            out[i] = (out[i] + small::mul(w, f, p2)) % p2;
        }
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// Coefficient matrix of the map (α_0..α_{2p-1}) ↦ (B_0..B_{p-1}, D_0..D_{p-1}):
/// B_0 = α_0, B_1 = α_1 + α_p + α_{2p-1}, B_j = α_j + α_{j+p-1} (2 ≤ j < p),
/// D_i = Σ_k k α_k i^{k-1} with 0^0 = 1.
pub fn mainp5_matrix(p: Prime) -> Result<FpMatrix> {
    let q = require_p5(p)?;
    let n = 2 * q as usize;
    let qu = q as usize;
    let mut m = FpMatrix::zeros(p, n, n);
    m.set(0, 0, 1);
    for col in [1, qu, 2 * qu - 1] {
        m.set(1, col, 1);
    }
    for j in 2..qu {
        m.set(j, j, 1);
        m.set(j, j + qu - 1, 1);
    }
    for i in 0..q {
        for k in 1..n as u64 {
            let pw = if k == 1 { 1 } else { small::pow(i, k - 1, q) };
            m.set(qu + i as usize, k as usize, small::mul(k % q, pw, q));
        }
    }
    Ok(m)
}

/// Solves for the coefficients mod p of g = Σ α_i x^i (deg < 2p) with
/// g ≡ Σ B_i x^i pointwise mod p and g'(i) ≡ D_i. The solution is checked by
/// substitution and pointwise.
pub fn mainp5_system(p: Prime, big_b: &[u64], big_d: &[u64]) -> Result<Vec<u64>> {
    let q = require_p5(p)?;
    if big_b.len() as u64 != q || big_d.len() as u64 != q {
        return Err(Error::Dimension(format!("B and D need {q} entries each")));
    }
    let m = mainp5_matrix(p)?;
    let rhs: Vec<u64> = big_b.iter().chain(big_d).map(|v| v % q).collect();
    let e = match solve_fp(&m, &rhs)? {
        SolveOutcome::Unique(e) => e,
        other => return Err(Error::Invariant(format!("coefficient matrix is singular mod {q}: {other:?}"))),
    };
    if m.mul_vec(&e)? != rhs {
        return Err(Error::Invariant("solution fails substitution".into()));
    }
    for x in 0..q {
        let g = e.iter().rev().fold(0, |acc, &c| small::add(small::mul(acc, x, q), c, q));
        let red = big_b.iter().rev().fold(0, |acc, &c| small::add(small::mul(acc, x, q), c % q, q));
        let dg = (1..e.len()).rev().fold(0, |acc, k| small::add(small::mul(acc, x, q), small::mul(k as u64 % q, e[k], q), q));
        if g != red || dg != big_d[x as usize] % q {
            return Err(Error::Invariant(format!("reduced form fails at x = {x}")));
        }
    }
    Ok(e)
}

fn horner(coeffs: &[u64], x: u64, m: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| small::add(small::mul(acc, x, m), c % m, m))
}

/// l(z) = g0^p(0)/p + z_0 / g0'(0) + Σ_{i=1}^{p-1} w_i g1(g0^i(0)) mod p, with
/// w_i = Π_{j=i+1}^{p-1} g0'(g0^j(0)) and g1 = Σ z_k x^k. Nonzero exactly
/// when g = g0 + p g1 has g^p(0) ≢ 0 mod p^2.
pub fn mainp5_linear_form(p: Prime, g0: &[u64], z: &[u64]) -> Result<u64> {
    let q = require_p5(p)?;
    let p2 = q * q;
    let g0: Vec<u64> = g0.iter().map(|c| c % q).collect();
    let dg0: Vec<u64> = (1..g0.len()).map(|k| small::mul(k as u64 % q, g0[k], q)).collect();
    let mut orbit = vec![0u64];
    for _ in 0..q {
        let y = *orbit.last().expect("nonempty");
        orbit.push(horner(&g0, y, p2));
    }
    let yp = orbit[q as usize];
    if yp % q != 0 {
        return Err(Error::Precondition("g0 is not transitive mod p".into()));
    }
    let d: Vec<u64> = orbit[..q as usize].iter().map(|&y| horner(&dg0, y % q, q)).collect();
    if d.iter().fold(1, |acc, &v| small::mul(acc, v, q)) != 1 {
        return Err(Error::Precondition("derivative product along the orbit is not 1 mod p".into()));
    }
    let inv0 = small::inv(d[0], q).ok_or_else(|| Error::Precondition("g0'(0) is not invertible".into()))?;
    let z0 = z.first().copied().unwrap_or(0) % q;
    let mut l = small::add((yp / q) % q, small::mul(z0, inv0, q), q);
    let mut w = 1u64;
    for i in (1..q as usize).rev() {
        l = small::add(l, small::mul(w, horner(z, orbit[i] % q, q), q), q);
        w = small::mul(w, d[i], q);
    }
    Ok(l)
}

/// g^p(0) mod p^2 for g = g0 + p g1, by iteration.
pub fn lifted_orbit_value(p: Prime, g0: &[u64], z: &[u64]) -> u64 {
    let q = p.get();
    let p2 = q * q;
    let n = g0.len().max(z.len());
    let coeffs: Vec<u64> = (0..n)
        .map(|i| (g0.get(i).copied().unwrap_or(0) % q + q * (z.get(i).copied().unwrap_or(0) % q)) % p2)
        .collect();
    (0..q).fold(0, |y, _| horner(&coeffs, y, p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::IntPolynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn translation_family() {
        let g = p5_generate(pr(5), &[0, 1, 2, 3, 4], &[1; 5], &[]).unwrap();
        assert_eq!(g.instance.c, vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(g.conditions.verdict.pass);
        assert!(transitive_mod(&g.function, 2).unwrap().transitive);
        assert_eq!(mahler_to_power_mod_p2(pr(5), &g.mahler_mod_p2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn x5_plus_1_fails_derivative_and_orbit() {
        let f = PadicFunction::polynomial(IntPolynomial::from_i64s(&[1, 0, 0, 0, 0, 1]), pr(5), 3).unwrap();
        let r = ergp5_conditions(&f).unwrap();
        assert!(r.transitive_mod_p);
        assert_eq!(r.derivative_product, "0");
        assert_eq!(r.orbit_value, "0");
        assert_eq!(r.verdict.failed_condition.as_deref(), Some("derivative-product"));
    }

    #[test]
    fn infeasible_inputs_rejected() {
        assert!(p5_generate(pr(5), &[0, 1, 2, 3, 4], &[1, 1, 1, 1, 2], &[]).is_err());
        assert!(p5_generate(pr(5), &[0, 1, 2, 3, 3], &[1; 5], &[]).is_err());
        assert!(p5_generate(pr(5), &[0, 1, 2, 3, 4], &[1, 1, 1, 0, 1], &[]).is_err());
        assert!(p5_generate(pr(3), &[0, 1, 2], &[1; 3], &[]).is_err());
    }

    #[test]
    fn generated_maps_hit_phi_and_bvec() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [5, 7] {
            for _ in 0..20 {
                let (cycle, bvec) = random_instance(pr(p), &mut rng);
                let g = p5_generate(pr(p), &cycle, &bvec, &random_lift(pr(p), &mut rng)).unwrap();
                let vals = g.function.reduce(1).unwrap();
                assert_eq!(vals, g.instance.phi);
                let s = vdp_coefficients(&g.function, 2 * p, 2).unwrap();
                for i in 0..p as usize {
                    assert_eq!(s.normalized_mod(i + p as usize, 1).unwrap(), bvec[i]);
                }
                let power = mahler_to_power_mod_p2(pr(p), &g.mahler_mod_p2).unwrap();
                let table = g.function.reduce(2).unwrap();
                for x in 0..p * p {
                    assert_eq!(horner(&power, x, p * p), table[x as usize]);
                }
            }
        }
    }

    #[test]
    fn matrix_invertible() {
        for p in [5, 7, 11] {
            let m = mainp5_matrix(pr(p)).unwrap();
            assert_eq!(m.rank(), 2 * p as usize, "p = {p}");
        }
    }

    #[test]
    fn system_recovers_translation() {
        let e = mainp5_system(pr(5), &[1, 1, 0, 0, 0], &[1; 5]).unwrap();
        assert_eq!(e, vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn system_recovers_generated_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [5u64, 7, 11] {
            let q = p as usize;
            for _ in 0..10 {
                let (cycle, bvec) = random_instance(pr(p), &mut rng);
                let g = p5_generate(pr(p), &cycle, &bvec, &[]).unwrap();
                let mut alpha: Vec<u64> = mahler_to_power_mod_p2(pr(p), &g.mahler_mod_p2).unwrap().iter().map(|c| c % p).collect();
                alpha.resize(2 * q, 0);
                let mut big_b = vec![0u64; q];
                big_b[0] = alpha[0];
                big_b[1] = (alpha[1] + alpha[q] + alpha[2 * q - 1]) % p;
                for j in 2..q {
                    big_b[j] = (alpha[j] + alpha[j + q - 1]) % p;
                }
                let big_d: Vec<u64> = (0..p)
                    .map(|i| (1..2 * q).fold(0, |acc, k| (acc + k as u64 * alpha[k] % p * if k == 1 { 1 } else { small::pow(i, k as u64 - 1, p) }) % p))
                    .collect();
                // g'(i) ≡ b_{i+p}
                assert_eq!(big_d, bvec);
                assert_eq!(mainp5_system(pr(p), &big_b, &big_d).unwrap(), alpha, "p = {p}");
            }
        }
    }

    #[test]
    fn linear_form_translation() {
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &[]).unwrap(), 1);
        // g1 = 3: l = 1 + 3 + 4 * 3 = 16
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &[3]).unwrap(), 1);
        // g1 = 4: l = 1 + 4 + 16 = 21
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &[4]).unwrap(), 1);
        // g1 = 4 + 4x: l = 1 + 4 + 16 + 4 * 10 = 61
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &[4, 4]).unwrap(), 1);
        // g1 = 4x^4: Σ_{i=1}^{4} 4 i^4 = 4 * 354 ≡ 1, l = 1 + 1 = 2
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &[0, 0, 0, 0, 4]).unwrap(), 2);
        // g1 = x^4: l = 1 + 354 ≡ 0
        let z = [0, 0, 0, 0, 1];
        assert_eq!(mainp5_linear_form(pr(5), &[1, 1], &z).unwrap(), 0);
        assert_eq!(lifted_orbit_value(pr(5), &[1, 1], &z), 0);
    }

    #[test]
    fn linear_form_matches_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [5, 7] {
            let mut zeros = 0;
            for _ in 0..300 {
                let (cycle, bvec) = random_instance(pr(p), &mut rng);
                let g = p5_generate(pr(p), &cycle, &bvec, &[]).unwrap();
                let power = mahler_to_power_mod_p2(pr(p), &g.mahler_mod_p2).unwrap();
                let g0: Vec<u64> = power.iter().map(|c| c % p).collect();
                let z = random_lift(pr(p), &mut rng);
                let l = mainp5_linear_form(pr(p), &g0, &z).unwrap();
                let y = lifted_orbit_value(pr(p), &g0, &z);
                assert_eq!(y % p, 0);
                assert_eq!(l == 0, y == 0, "p={p} g0={g0:?} z={z:?}");
                zeros += (l == 0) as u32;
            }
            assert!(zeros > 0, "no zero fibers sampled at p = {p}");
        }
    }
}
