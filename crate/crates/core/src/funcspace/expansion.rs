//! Mahler and van der Put expansions and the triangular change of basis
//! between them.

use num_bigint::BigInt;
use num_traits::Zero;

use super::function::PadicFunction;
use super::series::{word_modulus, CoefficientSeries, SeriesKind};
use crate::arith::{ball_exponent, binomial_int, m_minus, small, Prime};
use crate::error::{Error, Result};

/// χ(m, x): 1 iff x ≡ m mod p^{⌊log_p m⌋ + 1} (mod p when m < p).
pub fn chi(m: u64, x: u64, p: Prime) -> bool {
    let q = p.get().pow(ball_exponent(m, p));
    x % q == m % q
}

/// B_m = f(m) for m < p and f(m) - f(m_-) otherwise, for m < count, mod p^k.
pub fn vdp_coefficients(f: &PadicFunction, count: u64, k: u32) -> Result<CoefficientSeries> {
    let values = f.point_values(count, k)?;
    let p = f.prime();
    let m = p.get().pow(k);
    let terms = (0..count)
        .map(|i| {
            if i < p.get() {
                Ok(values[i as usize])
            } else {
                Ok(small::sub(values[i as usize], values[m_minus(i, p)? as usize], m))
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    CoefficientSeries::new(SeriesKind::VanDerPut, p, k, terms)
}

/// a_n = Σ_{i ≤ n} (-1)^{n-i} C(n, i) f(i) mod p^k for n < count. The
/// binomials run along Pascal rows mod p^k, which equals reducing the exact
/// alternating sum.
pub fn mahler_coefficients(f: &PadicFunction, count: u64, k: u32) -> Result<CoefficientSeries> {
    let values = f.point_values(count, k)?;
    let terms = mahler_from_values(&values, f.prime().get().pow(k));
    CoefficientSeries::new(SeriesKind::Mahler, f.prime(), k, terms)
}

pub(crate) fn mahler_from_values(values: &[u64], m: u64) -> Vec<u64> {
    let mut row = vec![0u64; values.len()];
    let mut out = Vec::with_capacity(values.len());
    for n in 0..values.len() {
        row[n] = 1 % m;
        for i in (1..n).rev() {
            row[i] = small::add(row[i], row[i - 1], m);
        }
        let mut acc = 0u64;
        for i in 0..=n {
            let term = small::mul(row[i], values[i], m);
            acc = if (n - i) % 2 == 0 { small::add(acc, term, m) } else { small::sub(acc, term, m) };
        }
        out.push(acc);
    }
    out
}

/// a_n(m): the n-th Mahler coefficient of χ(m, ·), exactly.
pub fn basis_change_anm(n: u64, m: u64, p: Prime) -> BigInt {
    if n < m {
        return BigInt::zero();
    }
    let q = p.get().pow(ball_exponent(m, p));
    let mut acc = BigInt::zero();
    let mut idx = m;
    while idx <= n {
        let term = binomial_int(n, idx);
        if (n - idx) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        idx += q;
    }
    acc
}

/// A_m(n): the m-th van der Put coefficient of C(x, n), exactly.
pub fn basis_change_amn(m: u64, n: u64, p: Prime) -> BigInt {
    if m < p.get() {
        binomial_int(m, n)
    } else {
        let minus = m_minus(m, p).expect("m >= p");
        binomial_int(m, n) - binomial_int(minus, n)
    }
}

fn check_input(series: &CoefficientSeries, kind: SeriesKind, up_to: usize) -> Result<()> {
    if series.kind() != kind {
        return Err(Error::Domain(format!("expected a {kind} series, got {}", series.kind())));
    }
    if series.len() < up_to {
        return Err(Error::InsufficientLength { needed: up_to, have: series.len() });
    }
    Ok(())
}

/// a_n = Σ_{m ≤ n} a_n(m) B_m for n < up_to.
pub fn vdp_to_mahler(series: &CoefficientSeries, up_to: usize) -> Result<CoefficientSeries> {
    check_input(series, SeriesKind::VanDerPut, up_to)?;
    let p = series.prime();
    let m = word_modulus(p, series.exponent())?;
    let steps: Vec<usize> = (0..up_to as u64).map(|j| p.get().pow(ball_exponent(j, p)) as usize).collect();
    let mut row = vec![0u64; up_to];
    let mut out = Vec::with_capacity(up_to);
    for n in 0..up_to {
        row[n] = 1 % m;
        for i in (1..n).rev() {
            row[i] = small::add(row[i], row[i - 1], m);
        }
        let mut acc = 0u64;
        for j in 0..=n {
            let b = series.get(j);
            if b == 0 {
                continue;
            }
            // a_n(j) = Σ_α (-1)^{n - j - α q} C(n, j + α q)
            let mut anm = 0u64;
            let mut idx = j;
            while idx <= n {
                anm = if (n - idx) % 2 == 0 { small::add(anm, row[idx], m) } else { small::sub(anm, row[idx], m) };
                idx += steps[j];
            }
            acc = small::add(acc, small::mul(anm, b, m), m);
        }
        out.push(acc);
    }
    CoefficientSeries::new(SeriesKind::Mahler, p, series.exponent(), out)
}

/// B_m = Σ_{n ≤ m} A_m(n) a_n for m < up_to. With A_m(n) = C(m, n) -
/// C(m_-, n) the sum splits into two Pascal-row sums S(m) - S(m_-).
pub fn mahler_to_vdp(series: &CoefficientSeries, up_to: usize) -> Result<CoefficientSeries> {
    check_input(series, SeriesKind::Mahler, up_to)?;
    let p = series.prime();
    let m = word_modulus(p, series.exponent())?;
    let mut row = vec![0u64; up_to];
    let mut row_sums = Vec::with_capacity(up_to);
    for x in 0..up_to {
        row[x] = 1 % m;
        for i in (1..x).rev() {
            row[i] = small::add(row[i], row[i - 1], m);
        }
        row_sums.push((0..=x).fold(0, |acc, n| small::add(acc, small::mul(row[n], series.get(n), m), m)));
    }
    let out = (0..up_to as u64)
        .map(|j| {
            if j < p.get() {
                row_sums[j as usize]
            } else {
                small::sub(row_sums[j as usize], row_sums[m_minus(j, p).expect("j >= p") as usize], m)
            }
        })
        .collect();
    CoefficientSeries::new(SeriesKind::VanDerPut, p, series.exponent(), out)
}
