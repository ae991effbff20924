//! Exhaustive checkers for the binomial congruences behind the Mahler
//! coefficient estimates.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, binomial_int, legendre_binomial_valuation, primes_in, small, Prime, PrimePowerBinomial};
use crate::error::{Error, Result};
use crate::verdict::Witness;

const KEPT_COUNTEREXAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub params: Witness,
    pub lhs: String,
    pub rhs: String,
    pub modulus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params_checked: u64,
    /// The first few failures; `failures` counts all of them.
    pub counterexamples: Vec<Counterexample>,
    pub failures: u64,
}

impl IdentityReport {
    fn new(identity: &str) -> Self {
        Self { identity: identity.to_string(), params_checked: 0, counterexamples: Vec::new(), failures: 0 }
    }

    fn record(&mut self, ok: bool, make: impl FnOnce() -> Counterexample) {
        self.params_checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                self.counterexamples.push(make());
            }
        }
    }

    fn merge(mut self, other: IdentityReport) -> Self {
        self.params_checked += other.params_checked;
        self.failures += other.failures;
        let room = KEPT_COUNTEREXAMPLES.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checked, {} counterexamples", self.identity, self.params_checked, self.failures)?;
        if let Some(c) = self.counterexamples.first() {
            write!(f, " (first: {}; lhs={} rhs={} mod {})", c.params, c.lhs, c.rhs, c.modulus)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    #[serde(rename = "abc")]
    Abc,
    #[serde(rename = "pzero")]
    Pzero,
    #[serde(rename = "bipro")]
    Bipro,
    #[serde(rename = "bip2")]
    Bip2,
    #[serde(rename = "valpro")]
    Valpro,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Abc, Suite::Pzero, Suite::Valpro, Suite::Bipro, Suite::Bip2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Abc => "abc",
            Suite::Pzero => "pzero",
            Suite::Bipro => "bipro",
            Suite::Bip2 => "bip2",
            Suite::Valpro => "valpro",
        }
    }

    /// Default (pmax, smax) for the sweep.
    pub fn default_bounds(self) -> (u64, u32) {
        match self {
            Suite::Abc | Suite::Pzero => (97, 0),
            Suite::Bipro | Suite::Valpro => (13, 4),
            Suite::Bip2 => (2, 6),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown identity suite {s:?}")))
    }
}

fn too_big(what: &str) -> Error {
    Error::Precondition(format!("{what} exceeds the configured sweep bounds"))
}

/// Runs one suite over primes ≤ pmax (odd primes for abc/pzero) and
/// 1 ≤ s ≤ smax (2 ≤ s for bipro, bip2; bip2 ignores pmax).
pub fn verify_identity_suite(suite: Suite, pmax: u64, smax: u32) -> Result<Vec<IdentityReport>> {
    match suite {
        Suite::Abc | Suite::Pzero => {
            if pmax > 1000 {
                return Err(too_big("pmax"));
            }
            let primes: Vec<Prime> = primes_in(3, pmax + 1);
            let report = if suite == Suite::Abc { abc_report(&primes) } else { pzero_report(&primes) };
            Ok(vec![report])
        }
        Suite::Valpro => {
            if pmax > 50 || smax > 8 {
                return Err(too_big("pmax/smax"));
            }
            Ok(vec![valpro_report(&primes_in(2, pmax + 1), smax)?])
        }
        Suite::Bipro => {
            if pmax > 31 {
                return Err(too_big("pmax"));
            }
            let primes = primes_in(2, pmax + 1);
            for &p in &primes {
                if p.checked_pow(smax.saturating_sub(1)).map_or(true, |q| q > 1 << 12) {
                    return Err(too_big("p^(s-1)"));
                }
            }
            bipro_reports(&primes, smax)
        }
        Suite::Bip2 => {
            if smax > 12 {
                return Err(too_big("smax"));
            }
            Ok(bip2_reports(smax))
        }
    }
}

fn big_mod(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// A, B, C for odd p and 1 ≤ r ≤ p-1, exactly.
pub fn abc_sums(p: u64, r: u64) -> (BigInt, BigInt, BigInt) {
    let (ri, pi) = (r as i64, p as i64);
    let bp = |j: u64| binomial_int(p, j);
    let br = |k: i64| if k < 0 || k > ri { BigInt::zero() } else { binomial_int(r, k as u64) };
    let mut a = BigInt::zero();
    for l in 1..=ri {
        for j in 1..=l {
            a += sign(ri - l + 1) * l * br(l - j) * bp(j as u64);
        }
    }
    let mut b = BigInt::zero();
    for l in ri + 1..pi {
        for j in l - ri..=l {
            b += sign(ri - l + 1) * l * br(l - j) * bp(j as u64);
        }
    }
    let mut c = BigInt::zero();
    for l in 1..ri {
        for j in 1..=ri - l {
            c += sign(ri - l) * l * br(l + j) * bp(j as u64);
        }
    }
    (a, b, c)
}

/// P for odd p and 1 ≤ r ≤ p-1, exactly.
pub fn pzero_sum(p: u64, r: u64) -> BigInt {
    let ri = r as i64;
    let mut total = BigInt::zero();
    for j in 1..=(p as i64 - 1 - ri) {
        for l in j..=j + ri {
            total += sign(ri - l + 1) * l * binomial_int(r, (l - j) as u64) * binomial_int(p, j as u64);
        }
    }
    total
}

fn abc_report(primes: &[Prime]) -> IdentityReport {
    primes
        .par_iter()
        .map(|&p| {
            let q = p.get();
            let m = BigInt::from(q * q);
            let mut rep = IdentityReport::new("abc");
            for r in 1..q {
                let (a, b, c) = abc_sums(q, r);
                let total = &a + &b + &c;
                let ok = big_mod(&total, &m).is_zero();
                rep.record(ok, || Counterexample {
                    params: Witness::new().with("p", q).with("r", r).with("A", &a).with("B", &b).with("C", &c),
                    lhs: total.to_string(),
                    rhs: "0".into(),
                    modulus: m.to_string(),
                });
            }
            rep
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(IdentityReport::new("abc"), IdentityReport::merge)
}

fn pzero_report(primes: &[Prime]) -> IdentityReport {
    primes
        .par_iter()
        .map(|&p| {
            let q = p.get();
            let m = BigInt::from(q * q);
            let mut rep = IdentityReport::new("pzero");
            for r in 2..q {
                let total = pzero_sum(q, r);
                rep.record(big_mod(&total, &m).is_zero(), || Counterexample {
                    params: Witness::new().with("p", q).with("r", r),
                    lhs: total.to_string(),
                    rhs: "0".into(),
                    modulus: m.to_string(),
                });
            }
            rep
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(IdentityReport::new("pzero"), IdentityReport::merge)
}

/// v_p(C(l p^s, j)) = s - v_p(j) for 1 ≤ l < p, s ≥ 1, 0 < j < l p^s. The
/// digit-sum valuation is compared with the claim and with a running
/// valuation of C(N, j) = C(N, j-1) (N - j + 1) / j.
fn valpro_report(primes: &[Prime], smax: u32) -> Result<IdentityReport> {
    let mut units = Vec::new();
    for &p in primes {
        for s in 1..=smax {
            for l in 1..p.get() {
                units.push((p, s, l));
            }
        }
    }
    let parts: Vec<Result<IdentityReport>> = units
        .par_iter()
        .map(|&(p, s, l)| {
            let q = p.get();
            let n = l * q.pow(s);
            let vp = |mut x: u64| {
                let mut v = 0i64;
                while x % q == 0 {
                    x /= q;
                    v += 1;
                }
                v
            };
            let mut rep = IdentityReport::new("valpro");
            let mut running = 0i64;
            for j in 1..n {
                running += vp(n - j + 1) - vp(j);
                let digit = legendre_binomial_valuation(l, s, j, p)? as i64;
                let claim = s as i64 - vp(j);
                rep.record(digit == claim && running == claim, || Counterexample {
                    params: Witness::new().with("p", q).with("l", l).with("s", s).with("j", j),
                    lhs: format!("{digit} (running {running})"),
                    rhs: claim.to_string(),
                    modulus: "exact".into(),
                });
            }
            Ok(rep)
        })
        .collect();
    parts.into_iter().try_fold(IdentityReport::new("valpro"), |acc, r| Ok(acc.merge(r?)))
}

/// Fills `out[X * 2p + Y]` with C(α + X Q, β + Y Q) mod p^2 for
/// Y ≤ X < 2p, where α, β < Q = p^{s-1}.
trait BlockBinomial: Sync {
    fn fill(&self, alpha: u64, beta: u64, out: &mut [u32]);
}

/// Factorial unit parts and valuations for every α + X Q.
struct FastBlocks {
    q: u64,
    p: u32,
    p2: u32,
    width: usize,
    unit: Vec<u32>,
    unit_inv: Vec<u32>,
    val: Vec<u32>,
    /// a * b mod p^2 for a, b < p^2
    mul: Vec<u32>,
}

impl FastBlocks {
    fn new(p: Prime, s: u32) -> Result<Self> {
        let engine = PrimePowerBinomial::new(p, 2)?;
        let pp = p.get();
        let q = pp.pow(s - 1);
        let width = 2 * pp as usize;
        let p2 = pp * pp;
        let cap = q as usize * width;
        let (mut unit, mut unit_inv, mut val) = (Vec::with_capacity(cap), Vec::with_capacity(cap), Vec::with_capacity(cap));
        for a in 0..q {
            for x in 0..width as u64 {
                let n = a + x * q;
                let u = engine.unit_factorial(n);
                unit.push(u as u32);
                unit_inv.push(small::inv(u, p2).expect("unit part is invertible") as u32);
                val.push(engine.factorial_valuation(n) as u32);
            }
        }
        let mul = (0..p2 * p2).map(|i| ((i / p2) * (i % p2) % p2) as u32).collect();
        Ok(Self { q, p: pp as u32, p2: p2 as u32, width, unit, unit_inv, val, mul })
    }

    fn row<'a>(&self, v: &'a [u32], a: u64) -> &'a [u32] {
        let start = a as usize * self.width;
        &v[start..start + self.width]
    }
}

impl BlockBinomial for FastBlocks {
    fn fill(&self, alpha: u64, beta: u64, out: &mut [u32]) {
        // n - k = d + Z Q with Z = X - Y - borrow
        let (d, borrow) = if alpha >= beta { (alpha - beta, 0) } else { (alpha + self.q - beta, 1) };
        let (ua, va) = (self.row(&self.unit, alpha), self.row(&self.val, alpha));
        let (ub, vb) = (self.row(&self.unit_inv, beta), self.row(&self.val, beta));
        let (ud, vd) = (self.row(&self.unit_inv, d), self.row(&self.val, d));
        let w = self.width;
        let p2 = self.p2 as usize;
        let m = |a: u32, b: u32| self.mul[a as usize * p2 + b as usize];
        for x in 0..w {
            for y in 0..=x {
                out[x * w + y] = if y + borrow > x {
                    0
                } else {
                    let z = x - y - borrow;
                    match va[x] - vb[y] - vd[z] {
                        0 => m(m(ua[x], ub[y]), ud[z]),
                        1 => m(m(m(ua[x], ub[y]), ud[z]), self.p),
                        _ => 0,
                    }
                };
            }
        }
    }
}

/// Exact binomials reduced mod p^2; the reference route.
struct ExactBlocks {
    q: u64,
    p: u64,
}

impl BlockBinomial for ExactBlocks {
    fn fill(&self, alpha: u64, beta: u64, out: &mut [u32]) {
        let w = 2 * self.p;
        let m = BigUint::from(self.p * self.p);
        for x in 0..w {
            for y in 0..=x {
                let r = binomial(alpha + x * self.q, beta + y * self.q) % &m;
                out[(x * w + y) as usize] = u32::try_from(&r).expect("below p^2");
            }
        }
    }
}

fn bipro_with<G: BlockBinomial>(p: Prime, s: u32, g: &G) -> [IdentityReport; 3] {
    let pp = p.get() as usize;
    let q = p.get().pow(s - 1);
    let p2 = (pp * pp) as u32;
    let cp: Vec<u32> =
        (0..=pp as u64).map(|j| u32::try_from(&(binomial(pp as u64, j) % BigUint::from(p2))).expect("small")).collect();
    let names = ["bipro(1)", "bipro(2)", "bipro(3)"];
    let fold = |acc: [IdentityReport; 3], r: [IdentityReport; 3]| {
        let [a0, a1, a2] = acc;
        let [r0, r1, r2] = r;
        [a0.merge(r0), a1.merge(r1), a2.merge(r2)]
    };
    let empty = || names.map(IdentityReport::new);
    let w = 2 * pp;
    (0..q)
        .into_par_iter()
        .map(|alpha| {
            let mut reps = empty();
            let mut t = vec![0u32; w * w];
            for beta in 0..q {
                g.fill(alpha, beta, &mut t);
                // C(α + X Q, β + Y Q), zero above the diagonal
                let at = |x: usize, y: usize| if y > x { 0 } else { t[x * w + y] };
                let ce = |lhs: u32, rhs: u32, r: usize, l: usize| Counterexample {
                    params: Witness::new()
                        .with("p", pp)
                        .with("s", s)
                        .with("alpha", alpha)
                        .with("beta", beta)
                        .with("r", r)
                        .with("l", l),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    modulus: p2.to_string(),
                };
                for l in 1..pp {
                    let lhs = at(pp, l);
                    let rhs = at(0, 0) * cp[l] % p2;
                    reps[0].record(lhs == rhs, || ce(lhs, rhs, 0, l));
                }
                for r in 1..pp {
                    let row = &t[r * w..r * w + r + 1];
                    let mut rev_buf = [0u32; 64];
                    for (dst, src) in rev_buf.iter_mut().zip(row.iter().rev()) {
                        *dst = *src;
                    }
                    // rev[i] = C(α + r Q, β + (r - i) Q)
                    let rev = &rev_buf[..=r];
                    let dot = |ys: &[u32], js: &[u32]| ys.iter().zip(js).fold(0, |acc, (a, b)| acc + a * b) % p2;
                    for l in 1..pp {
                        let lhs = at(r + pp, l);
                        let rhs = if l <= r {
                            // j = 0..=l pairs C(., β + (l-j) Q) with C(p, j); j = 0 is the leading term
                            dot(&rev[r - l..], &cp[..=l])
                        } else {
                            // j = l-r..=l, so l - j runs over r..=0
                            dot(rev, &cp[l - r..=l])
                        };
                        reps[1].record(lhs == rhs, || ce(lhs, rhs, r, l));
                    }
                    for l in 1..=r {
                        let lhs = at(r + pp, l + pp);
                        // j = 0..=r-l pairs C(., β + (l+j) Q) with C(p, j); for l = r only j = 0
                        let rhs = dot(&row[l..=r], &cp[..=r - l]);
                        reps[2].record(lhs == rhs, || ce(lhs, rhs, r, l));
                    }
                }
            }
            reps
        })
        .reduce(empty, fold)
}

fn bipro_reports(primes: &[Prime], smax: u32) -> Result<Vec<IdentityReport>> {
    let mut acc = ["bipro(1)", "bipro(2)", "bipro(3)"].map(IdentityReport::new);
    for &p in primes {
        for s in 2..=smax {
            let blocks = FastBlocks::new(p, s)?;
            let got = bipro_with(p, s, &blocks);
            // Small blocks are recomputed from exact binomials.
            if blocks.q <= 27 {
                let exact = bipro_with(p, s, &ExactBlocks { q: blocks.q, p: p.get() });
                if exact != got {
                    return Err(Error::Invariant(format!("bipro block engines disagree at p = {p}, s = {s}")));
                }
            }
            let [a0, a1, a2] = acc;
            let [r0, r1, r2] = got;
            acc = [a0.merge(r0), a1.merge(r1), a2.merge(r2)];
        }
    }
    Ok(acc.into())
}

/// The five p = 2 congruences, with exact binomials.
fn bip2_reports(smax: u32) -> Vec<IdentityReport> {
    let mut reps: Vec<IdentityReport> = (1..=5).map(|i| IdentityReport::new(&format!("bip2({i})"))).collect();
    let c4 = |n: u64, k: u64| u64::try_from(&(binomial(n, k) % BigUint::from(4u32))).expect("below 4");
    for s in 2..=smax {
        let h = 1u64 << (s - 1);
        let t = 1u64 << s;
        for a in 0..h {
            for b in 0..h {
                let cases = [
                    (c4(a + t, b + h), 2 * c4(a, b) % 4),
                    (c4(a + t, b + t), c4(a, b)),
                    (c4(a + h + t, b + h), (c4(a + h, b + h) + 2 * c4(a + h, b)) % 4),
                    (c4(a + h + t, b + t), (c4(a + h, b) + 2 * c4(a + h, b + h)) % 4),
                    (c4(a + h + t, b + h + t), c4(a + h, b + h)),
                ];
                for (rep, (lhs, rhs)) in reps.iter_mut().zip(cases) {
                    rep.record(lhs == rhs, || Counterexample {
                        params: Witness::new().with("s", s).with("alpha", a).with("beta", b),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                        modulus: "4".into(),
                    });
                }
            }
        }
    }
    reps
}
