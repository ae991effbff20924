use serde::Serialize;

use crate::analysis::ud1::ser_decimal_nested;
use crate::arith::Prime;
use crate::error::Result;
use crate::funcspace::PadicFunction;

/// Permutation structure of a map on Z/p^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub prime: u64,
    pub exponent: u32,
    pub bijective: bool,
    pub transitive: bool,
    /// All cycles when bijective, each starting at its smallest element, in
    /// increasing order of that element (so the cycle of 0 comes first).
    #[serde(serialize_with = "ser_decimal_nested")]
    pub cycles: Vec<Vec<u64>>,
    /// Two colliding inputs x < y with f(x) = f(y) when not bijective.
    pub witness: Option<(String, String)>,
}

impl CycleReport {
    pub fn from_table(prime: Prime, exponent: u32, table: &[u64]) -> Self {
        let size = table.len();
        let mut preimage = vec![usize::MAX; size];
        for (x, &y) in table.iter().enumerate() {
            let y = y as usize;
            if preimage[y] != usize::MAX {
                return CycleReport {
                    prime: prime.get(),
                    exponent,
                    bijective: false,
                    transitive: false,
                    cycles: Vec::new(),
                    witness: Some((preimage[y].to_string(), x.to_string())),
                };
            }
            preimage[y] = x;
        }
        let mut seen = vec![false; size];
        let mut cycles = Vec::new();
        for start in 0..size {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u64);
                x = table[x] as usize;
            }
            cycles.push(cycle);
        }
        CycleReport { prime: prime.get(), exponent, bijective: true, transitive: cycles.len() == 1, cycles, witness: None }
    }

    /// The cycle through 0, when bijective.
    pub fn cycle_of_zero(&self) -> Option<&[u64]> {
        self.cycles.first().map(Vec::as_slice)
    }
}

/// Single-cycle test by following the orbit of 0.
pub fn is_transitive_table(table: &[u64]) -> bool {
    let mut x = 0usize;
    for step in 1..=table.len() {
        x = table[x] as usize;
        if x == 0 {
            return step == table.len();
        }
    }
    false
}

pub fn bijective_mod(f: &PadicFunction, n: u32) -> Result<CycleReport> {
    Ok(CycleReport::from_table(f.prime(), n, &f.reduce(n)?))
}

pub fn transitive_mod(f: &PadicFunction, n: u32) -> Result<CycleReport> {
    bijective_mod(f, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str, prime: u64, depth: u32) -> PadicFunction {
        PadicFunction::parse_polynomial(text, Prime::new(prime).unwrap(), depth).unwrap()
    }

    #[test]
    fn translation_is_one_cycle() {
        let r = bijective_mod(&poly("x+1", 2, 3), 3).unwrap();
        assert!(r.bijective && r.transitive);
        assert_eq!(r.cycles, vec![(0..8).collect::<Vec<u64>>()]);
    }

    #[test]
    fn square_collides_at_level_two() {
        let f = poly("x^2", 2, 3);
        let r1 = bijective_mod(&f, 1).unwrap();
        assert!(r1.bijective && !r1.transitive);
        assert_eq!(r1.cycles, vec![vec![0], vec![1]]);
        let r2 = bijective_mod(&f, 2).unwrap();
        assert!(!r2.bijective);
        assert_eq!(r2.witness, Some(("0".into(), "2".into())));
    }

    #[test]
    fn counter_examples() {
        let f = poly("1+3*x+2*x^3", 2, 3);
        let r = transitive_mod(&f, 2).unwrap();
        assert!(r.transitive);
        assert_eq!(r.cycle_of_zero().unwrap(), &[0, 1, 2, 3]);
        assert!(!transitive_mod(&f, 3).unwrap().transitive);

        let g = poly("1+4*x+4*x^3+2*x^5", 3, 3);
        let r = transitive_mod(&g, 2).unwrap();
        assert_eq!(r.cycle_of_zero().unwrap(), &[0, 1, 2, 6, 7, 5, 3, 4, 8]);
        assert!(!transitive_mod(&g, 3).unwrap().transitive);

        let h = poly("x^5+1", 5, 2);
        assert!(bijective_mod(&h, 1).unwrap().transitive);
        assert!(!transitive_mod(&h, 2).unwrap().transitive);
    }

    #[test]
    fn orbit_shortcut_matches_report() {
        for c in 0..8u64 {
            for a in 0..8u64 {
                let table: Vec<u64> = (0..8).map(|x| (a * x + c) % 8).collect();
                let r = CycleReport::from_table(Prime::new(2).unwrap(), 3, &table);
                assert_eq!(is_transitive_table(&table), r.transitive);
                if r.bijective {
                    assert_eq!(r.cycles.iter().map(Vec::len).sum::<usize>(), 8);
                }
            }
        }
    }
}
