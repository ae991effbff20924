//! Truncated Mahler and van der Put coefficient series.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{floor_log, Modulus, Prime, Residue};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "mahler")]
    Mahler,
    #[serde(rename = "vdp")]
    VanDerPut,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Mahler => "mahler",
            SeriesKind::VanDerPut => "vdp",
        })
    }
}

/// Coefficients a_n (Mahler) or B_m (van der Put) modulo p^k. Terms past the
/// end are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientSeries {
    kind: SeriesKind,
    prime: Prime,
    exponent: u32,
    modulus: u64,
    terms: Vec<u64>,
}

/// p^k as u64, refusing moduli too large for the word-size kernels.
pub(crate) fn word_modulus(prime: Prime, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("modulus exponent must be at least 1".into()));
    }
    prime
        .checked_pow(k)
        .filter(|&m| m < 1 << 62)
        .ok_or(Error::TableTooLarge { prime: prime.get(), exponent: k })
}

impl CoefficientSeries {
    /// Terms are reduced modulo p^k.
    pub fn new(kind: SeriesKind, prime: Prime, exponent: u32, terms: Vec<u64>) -> Result<Self> {
        let modulus = word_modulus(prime, exponent)?;
        let terms = terms.into_iter().map(|t| t % modulus).collect();
        Ok(CoefficientSeries { kind, prime, exponent, modulus, terms })
    }

    /// Signed terms, reduced into 0..p^k.
    pub fn from_i64s(kind: SeriesKind, prime: Prime, exponent: u32, terms: &[i64]) -> Result<Self> {
        let modulus = word_modulus(prime, exponent)?;
        let terms = terms.iter().map(|&t| (t as i128).rem_euclid(modulus as i128) as u64).collect();
        Self::new(kind, prime, exponent, terms)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// p^k.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// The n-th term; zero past the end.
    pub fn get(&self, n: usize) -> u64 {
        self.terms.get(n).copied().unwrap_or(0)
    }

    pub fn term(&self, n: usize) -> Residue {
        let m = Modulus::new(self.prime, self.exponent).expect("exponent >= 1");
        Residue::from_u64(self.get(n), &m)
    }

    /// Same terms viewed modulo a smaller power p^j.
    pub fn reduce_to(&self, exponent: u32) -> Result<Self> {
        if exponent > self.exponent {
            return Err(Error::DepthExceeded { requested: exponent, depth: self.exponent });
        }
        Self::new(self.kind, self.prime, exponent, self.terms.clone())
    }

    pub fn truncated(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.terms.truncate(len);
        s
    }

    /// Normalized coefficient b_m = B_m / p^{⌊log_p m⌋} (or c_n for Mahler),
    /// known modulo p^{k - ⌊log_p m⌋}.
    pub fn normalized(&self, n: usize) -> Result<Residue> {
        let e = floor_log(n as u64, self.prime);
        if e >= self.exponent {
            return Err(Error::Precondition(format!(
                "normalized coefficient {n} carries no information modulo p^{}",
                self.exponent
            )));
        }
        let scale = self.prime.get().pow(e);
        let t = self.get(n);
        if t % scale != 0 {
            return Err(Error::NotExact { index: n, required: e });
        }
        let m = Modulus::new(self.prime, self.exponent - e)?;
        Ok(Residue::from_u64(t / scale, &m))
    }

    /// Normalized coefficient reduced modulo p^j (j ≤ k - ⌊log_p n⌋).
    pub fn normalized_mod(&self, n: usize, j: u32) -> Result<u64> {
        let r = self.normalized(n)?.reduce_to(j)?;
        Ok(r.to_u64().expect("word-size modulus"))
    }
}

/// JSON document for series and value tables: header fields plus decimal
/// string terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub kind: String,
    pub p: u64,
    pub k: u32,
    pub length: usize,
    pub terms: Vec<String>,
}

impl SeriesDocument {
    pub fn from_series(s: &CoefficientSeries) -> Self {
        SeriesDocument {
            kind: s.kind.to_string(),
            p: s.prime.get(),
            k: s.exponent,
            length: s.terms.len(),
            terms: s.terms.iter().map(u64::to_string).collect(),
        }
    }

    pub fn parse_terms(&self) -> Result<Vec<u64>> {
        if self.terms.len() != self.length {
            return Err(Error::Dimension(format!(
                "header says length {} but {} terms are present",
                self.length,
                self.terms.len()
            )));
        }
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse { pos: i, msg: format!("term {i} is not a decimal string: {t:?}") });
                }
                t.parse::<u64>().map_err(|e| Error::Parse { pos: i, msg: format!("term {i}: {e}") })
            })
            .collect()
    }

    pub fn to_series(&self) -> Result<CoefficientSeries> {
        let kind = match self.kind.as_str() {
            "mahler" => SeriesKind::Mahler,
            "vdp" => SeriesKind::VanDerPut,
            other => return Err(Error::Domain(format!("not a coefficient series kind: {other}"))),
        };
        let prime = Prime::new(self.p)?;
        let terms = self.parse_terms()?;
        let m = word_modulus(prime, self.k)?;
        if let Some(i) = terms.iter().position(|&t| t >= m) {
            return Err(Error::Domain(format!("term {i} is not reduced modulo p^{}", self.k)));
        }
        CoefficientSeries::new(kind, prime, self.k, terms)
    }
}
