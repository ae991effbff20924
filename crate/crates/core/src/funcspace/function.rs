//! Functions Z_p -> Z_p at finite depth N, in four interchangeable forms.

use num_bigint::BigUint;

use super::polynomial::{IntPolynomial, ReducedPolynomial};
use super::series::{word_modulus, CoefficientSeries, SeriesDocument, SeriesKind};
use crate::arith::{small, Modulus, Prime, Residue};
use crate::error::{Error, Result};
use crate::verdict::Witness;

pub const DEFAULT_MAX_DEPTH: u32 = 12;
/// Largest number of entries a dense table over Z/p^n may have.
pub const TABLE_LIMIT: u64 = 1 << 24;

/// Depth cap, overridable through `PADIC_DYN_MAX_DEPTH`.
pub fn max_depth() -> u32 {
    std::env::var("PADIC_DYN_MAX_DEPTH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&d: &u32| d >= 1)
        .unwrap_or(DEFAULT_MAX_DEPTH)
}

/// Working depth used when none is given: 4 for p ∈ {2, 3}, 3 otherwise.
pub fn default_depth(p: Prime) -> u32 {
    if p.get() <= 3 {
        4
    } else {
        3
    }
}

/// p^n as a table size, refusing tables that would not fit in memory.
pub fn table_size(p: Prime, n: u32) -> Result<u64> {
    p.checked_pow(n)
        .filter(|&s| s <= TABLE_LIMIT)
        .ok_or(Error::TableTooLarge { prime: p.get(), exponent: n })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    Polynomial(IntPolynomial),
    ValueTable(Vec<u64>),
    Mahler(CoefficientSeries),
    VanDerPut(CoefficientSeries),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicFunction {
    prime: Prime,
    depth: u32,
    form: Form,
}

fn check_depth(depth: u32) -> Result<()> {
    let max = max_depth();
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    if depth > max {
        return Err(Error::DepthLimit { depth, max });
    }
    Ok(())
}

impl PadicFunction {
    pub fn polynomial(poly: IntPolynomial, prime: Prime, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        word_modulus(prime, depth)?;
        Ok(PadicFunction { prime, depth, form: Form::Polynomial(poly) })
    }

    /// Parses the polynomial grammar of [`IntPolynomial`].
    pub fn parse_polynomial(text: &str, prime: Prime, depth: u32) -> Result<Self> {
        Self::polynomial(text.parse()?, prime, depth)
    }

    /// Table of f(0), ..., f(p^N - 1), each below p^N.
    pub fn value_table(prime: Prime, depth: u32, values: Vec<u64>) -> Result<Self> {
        check_depth(depth)?;
        let size = table_size(prime, depth)?;
        if values.len() as u64 != size {
            return Err(Error::Dimension(format!("value table needs {size} entries, got {}", values.len())));
        }
        if let Some(x) = values.iter().position(|&v| v >= size) {
            return Err(Error::Domain(format!("table entry at {x} is not reduced modulo p^{depth}")));
        }
        Ok(PadicFunction { prime, depth, form: Form::ValueTable(values) })
    }

    /// A series with a term for every n < p^N; its exponent must be at least N.
    pub fn from_series(series: CoefficientSeries, depth: u32) -> Result<Self> {
        let needed = table_size(series.prime(), depth)? as usize;
        if series.len() < needed {
            return Err(Error::InsufficientLength { needed, have: series.len() });
        }
        Self::from_series_finite(series, depth)
    }

    /// A series whose terms past its length are zero by intent, such as the
    /// Mahler expansion of an integer-valued polynomial.
    pub fn from_series_finite(series: CoefficientSeries, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        if series.exponent() < depth {
            return Err(Error::DepthExceeded { requested: depth, depth: series.exponent() });
        }
        let prime = series.prime();
        let form = match series.kind() {
            SeriesKind::Mahler => Form::Mahler(series),
            SeriesKind::VanDerPut => Form::VanDerPut(series),
        };
        Ok(PadicFunction { prime, depth, form })
    }

    /// Builds a function from a JSON document (series or value table).
    pub fn from_document(doc: &SeriesDocument, depth: Option<u32>) -> Result<Self> {
        if doc.kind == "value-table" {
            let prime = Prime::new(doc.p)?;
            if depth.is_some_and(|d| d != doc.k) {
                return Err(Error::Precondition("a value table is fixed at its own depth".into()));
            }
            return Self::value_table(prime, doc.k, doc.parse_terms()?);
        }
        let series = doc.to_series()?;
        let depth = match depth {
            Some(d) => d,
            None => {
                // Largest depth the series determines.
                let mut d = 0;
                while d < series.exponent()
                    && series.prime().checked_pow(d + 1).is_some_and(|s| s as usize <= series.len())
                {
                    d += 1;
                }
                if d == 0 {
                    return Err(Error::InsufficientLength { needed: series.prime().get() as usize, have: series.len() });
                }
                d
            }
        };
        Self::from_series(series, depth)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    /// Same function at another depth. Tables cannot be deepened; series need
    /// enough precision.
    pub fn with_depth(&self, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        match &self.form {
            Form::Polynomial(p) => Self::polynomial(p.clone(), self.prime, depth),
            Form::ValueTable(t) => {
                if depth > self.depth {
                    return Err(Error::DepthExceeded { requested: depth, depth: self.depth });
                }
                let m = self.prime.get().pow(depth);
                Self::value_table(self.prime, depth, t[..m as usize].iter().map(|v| v % m).collect())
            }
            Form::Mahler(s) | Form::VanDerPut(s) => {
                if s.exponent() < depth {
                    return Err(Error::DepthExceeded { requested: depth, depth: s.exponent() });
                }
                Ok(PadicFunction { prime: self.prime, depth, form: self.form.clone() })
            }
        }
    }

    fn check_k(&self, k: u32) -> Result<()> {
        if k == 0 || k > self.depth {
            return Err(Error::DepthExceeded { requested: k, depth: self.depth });
        }
        Ok(())
    }

    /// f(x) mod p^k. Polynomials are evaluated exactly at x; the other forms
    /// read x through its canonical representative mod p^N.
    pub fn evaluate(&self, x: &BigUint, k: u32) -> Result<Residue> {
        self.check_k(k)?;
        let modulus = Modulus::new(self.prime, k)?;
        match &self.form {
            Form::Polynomial(poly) => Ok(Residue::new(&poly.eval_big(x, modulus.value()), &modulus)),
            _ => {
                let top = BigUint::from(self.prime.get()).pow(self.depth);
                let x = u64::try_from(&(x % top)).expect("depth fits a word");
                Ok(Residue::from_u64(self.eval_u64(x, k)?, &modulus))
            }
        }
    }

    /// f(x) mod p^k for a word-size x.
    pub fn eval_u64(&self, x: u64, k: u32) -> Result<u64> {
        self.check_k(k)?;
        let m = self.prime.get().pow(k);
        Ok(match &self.form {
            Form::Polynomial(poly) => ReducedPolynomial::new(poly, m).eval(x),
            Form::ValueTable(t) => t[(x % t.len() as u64) as usize] % m,
            Form::Mahler(s) => {
                // Σ a_n C(x, n) with C(x, n) computed exactly and reduced.
                let limit = (x as usize + 1).min(s.len());
                let mut c = BigUint::from(1u8);
                let mut acc = 0u64;
                for n in 0..limit {
                    if n > 0 {
                        c = c * (x - n as u64 + 1) / n as u64;
                    }
                    let cm = u64::try_from(&(&c % m)).expect("below m");
                    acc = small::add(acc, small::mul(s.get(n) % m, cm, m), m);
                }
                acc
            }
            Form::VanDerPut(s) => vdp_eval(s, x, m),
        })
    }

    /// f(0), ..., f(count - 1) modulo p^k. Value tables only answer below
    /// p^N.
    pub fn point_values(&self, count: u64, k: u32) -> Result<Vec<u64>> {
        self.check_k(k)?;
        if count > TABLE_LIMIT {
            return Err(Error::TableTooLarge { prime: self.prime.get(), exponent: k });
        }
        let p = self.prime.get();
        let m = p.pow(k);
        Ok(match &self.form {
            Form::Polynomial(poly) => {
                let r = ReducedPolynomial::new(poly, m);
                (0..count).map(|x| r.eval(x)).collect()
            }
            Form::ValueTable(t) => {
                if count > t.len() as u64 {
                    return Err(Error::InsufficientLength { needed: count as usize, have: t.len() });
                }
                t[..count as usize].iter().map(|v| v % m).collect()
            }
            Form::Mahler(s) => mahler_values(s, count as usize, m),
            Form::VanDerPut(s) => {
                // f(x) = f(x_-) + B_x, with x_- the leading digit removed.
                let mut out = Vec::with_capacity(count as usize);
                let mut top = p; // p^{⌊log_p x⌋ + 1}
                for x in 0..count {
                    let b = s.get(x as usize) % m;
                    if x < p {
                        out.push(b);
                        continue;
                    }
                    if x >= top {
                        top *= p;
                    }
                    let minus = x % (top / p);
                    out.push(small::add(out[minus as usize], b, m));
                }
                out
            }
        })
    }

    /// The table of f mod p^n on 0..p^n - 1, without checking that it is
    /// well defined.
    pub fn values_mod(&self, n: u32) -> Result<Vec<u64>> {
        self.check_k(n)?;
        self.point_values(table_size(self.prime, n)?, n)
    }

    /// f_{/n}: the induced map on Z/p^n, after checking that f(x) mod p^n only
    /// depends on x mod p^n over the stored depth.
    pub fn reduce(&self, n: u32) -> Result<Vec<u64>> {
        self.check_k(n)?;
        if let Form::Polynomial(_) = self.form {
            return self.values_mod(n);
        }
        let m = table_size(self.prime, n)?;
        let mut all = self.point_values(table_size(self.prime, self.depth)?, n)?;
        if let Some(w) = first_lipschitz_break(&all, m) {
            return Err(Error::NotLipschitz(format!("reduction mod p^{n} is not well defined: {w}")));
        }
        all.truncate(m as usize);
        Ok(all)
    }

    /// The same function rendered as a value table at its depth.
    pub fn to_value_table(&self) -> Result<Self> {
        let values = self.values_mod(self.depth)?;
        Self::value_table(self.prime, self.depth, values)
    }

    pub fn to_document(&self) -> Result<SeriesDocument> {
        let values = self.values_mod(self.depth)?;
        Ok(SeriesDocument {
            kind: "value-table".into(),
            p: self.prime.get(),
            k: self.depth,
            length: values.len(),
            terms: values.iter().map(u64::to_string).collect(),
        })
    }
}

// Σ_{L ≥ 1} B_{x mod p^L}, keeping m = x mod p^L only when it has exactly L
// digits (or L = 1).
fn vdp_eval(s: &CoefficientSeries, x: u64, m: u64) -> u64 {
    let p = s.prime().get();
    let mut acc = s.get((x % p) as usize) % m;
    let mut low = p; // p^{L-1}
    while let Some(high) = low.checked_mul(p) {
        let idx = x % high;
        if idx >= s.len() as u64 && low >= s.len() as u64 {
            break;
        }
        if idx >= low {
            acc = small::add(acc, s.get(idx as usize) % m, m);
        }
        if x < high {
            break;
        }
        low = high;
    }
    acc
}

fn mahler_values(s: &CoefficientSeries, count: usize, m: u64) -> Vec<u64> {
    // Row x of Pascal's triangle mod m, truncated to the series length.
    let width = s.len();
    let terms: Vec<u64> = s.terms().iter().map(|t| t % m).collect();
    let mut row = vec![0u64; width.max(1)];
    row[0] = 1 % m;
    let mut out = Vec::with_capacity(count);
    for x in 0..count {
        if x > 0 {
            for n in (1..width.min(x + 1)).rev() {
                row[n] = small::add(row[n], row[n - 1], m);
            }
        }
        let upto = width.min(x + 1);
        out.push((0..upto).fold(0, |acc, n| small::add(acc, small::mul(terms[n], row[n], m), m)));
    }
    out
}

/// First (x, x mod p^n) pair in `values` (reduced mod p^n = `m`) breaking
/// f(x) ≡ f(x mod p^n).
pub(crate) fn first_lipschitz_break(values: &[u64], m: u64) -> Option<Witness> {
    (m as usize..values.len()).find_map(|x| {
        let y = x % m as usize;
        (values[x] % m != values[y] % m).then(|| {
            Witness::new()
                .with("x", x)
                .with("y", y)
                .with("modulus", m)
                .with("f(x)", values[x] % m)
                .with("f(y)", values[y] % m)
        })
    })
}
