//! Dense matrices over F_p and Gaussian elimination.

use serde::Serialize;

use super::residue::small;
use super::Prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "solution", rename_all = "kebab-case")]
pub enum SolveOutcome {
    Unique(Vec<u64>),
    NoSolution,
    NonUnique,
}

impl FpMatrix {
    /// Row-major entries; each is reduced mod p.
    pub fn new(prime: Prime, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let p = prime.get();
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(FpMatrix { prime, rows, cols, entries })
    }

    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { prime, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.prime.get();
    }

    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let p = self.prime.get();
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| small::add(acc, small::mul(self.get(r, c), x[c], p), p))
            })
            .collect())
    }

    /// Rank over F_p.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None).0
    }

    // Reduced row echelon form in place, carrying an optional right-hand
    // side. Returns the rank and pivot columns.
    fn eliminate(&mut self, mut rhs: Option<&mut Vec<u64>>) -> (usize, Vec<usize>) {
        let p = self.prime.get();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(pr * self.cols + c, row * self.cols + c);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    b.swap(pr, row);
                }
            }
            let inv = small::inv(self.get(row, col), p).expect("nonzero mod p");
            for c in 0..self.cols {
                let v = small::mul(self.get(row, c), inv, p);
                self.set(row, c, v);
            }
            if let Some(b) = rhs.as_deref_mut() {
                b[row] = small::mul(b[row], inv, p);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = small::sub(self.get(r, c), small::mul(factor, self.get(row, c), p), p);
                    self.set(r, c, v);
                }
                if let Some(b) = rhs.as_deref_mut() {
                    b[r] = small::sub(b[r], small::mul(factor, b[row], p), p);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (row, pivots)
    }
}

/// Solve M x ≡ b (mod p).
pub fn solve_fp(m: &FpMatrix, b: &[u64]) -> Result<SolveOutcome> {
    if b.len() != m.rows {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), m.rows)));
    }
    let p = m.prime.get();
    let mut work = m.clone();
    let mut rhs: Vec<u64> = b.iter().map(|v| v % p).collect();
    let (rank, pivots) = work.eliminate(Some(&mut rhs));
    if rhs[rank..].iter().any(|&v| v != 0) {
        return Ok(SolveOutcome::NoSolution);
    }
    if rank < m.cols {
        return Ok(SolveOutcome::NonUnique);
    }
    let mut x = vec![0; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rhs[r];
    }
    Ok(SolveOutcome::Unique(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let m = FpMatrix::identity(p(5), 4);
        assert_eq!(solve_fp(&m, &[1, 2, 3, 4]).unwrap(), SolveOutcome::Unique(vec![1, 2, 3, 4]));
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let m = FpMatrix::new(p(2), 2, 2, vec![1, 1, 0, 0]).unwrap();
        assert_eq!(solve_fp(&m, &[1, 1]).unwrap(), SolveOutcome::NoSolution);
        assert_eq!(solve_fp(&m, &[1, 0]).unwrap(), SolveOutcome::NonUnique);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rectangular_overdetermined_consistent() {
        // x = 2, y = 3 over F_7 with a redundant third equation.
        let m = FpMatrix::new(p(7), 3, 2, vec![1, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(solve_fp(&m, &[2, 3, 5]).unwrap(), SolveOutcome::Unique(vec![2, 3]));
        assert_eq!(solve_fp(&m, &[2, 3, 6]).unwrap(), SolveOutcome::NoSolution);
    }

    #[test]
    fn dimension_errors() {
        assert!(FpMatrix::new(p(3), 2, 2, vec![1, 2, 3]).is_err());
        let m = FpMatrix::identity(p(3), 2);
        assert!(solve_fp(&m, &[1]).is_err());
        assert!(m.mul_vec(&[1, 2, 3]).is_err());
    }

    #[test]
    fn solution_satisfies_system() {
        let m = FpMatrix::new(p(11), 3, 3, vec![2, 7, 1, 0, 3, 9, 4, 4, 6]).unwrap();
        let b = [3, 8, 1];
        match solve_fp(&m, &b).unwrap() {
            SolveOutcome::Unique(x) => assert_eq!(m.mul_vec(&x).unwrap(), b.to_vec()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
