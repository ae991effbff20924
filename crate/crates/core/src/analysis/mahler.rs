use crate::arith::{leading_digit, valuation_u64};
use crate::error::{Error, Result};
use crate::funcspace::{lipschitz_check_series, CoefficientSeries, SeriesKind};
use crate::verdict::{CriterionVerdict, Witness};

pub const MAHLER_UD1: &str = "ud1-mahler";

/// Divisibilities of the Mahler coefficients of a UD1 function, indexed by
/// n = n_- + n_s p^s (n_s the leading digit):
/// p odd: a_n ≡ 0 mod p^{s+1} when s ≥ 1 and n_s ≥ 2, or s ≥ 2 and n_s = 1;
/// p = 2: a_n ≡ 0 mod 2^{s+1} when s ≥ 2.
/// Indices whose requirement exceeds the series precision p^k are checked
/// modulo p^k.
pub fn mahler_ud1_predicate(series: &CoefficientSeries) -> Result<CriterionVerdict> {
    if series.kind() != SeriesKind::Mahler {
        return Err(Error::Domain("mahler_ud1_predicate needs a Mahler series".into()));
    }
    let lip = lipschitz_check_series(series);
    if !lip.pass {
        return Err(Error::NotLipschitz(lip.summary()));
    }
    let p = series.prime();
    let k = series.exponent();
    for (n, &a) in series.terms().iter().enumerate().skip(p.get() as usize) {
        let (lead, s) = leading_digit(n as u64, p);
        let condition = match (p.get(), lead) {
            (2, _) if s >= 2 => "leading-one",
            (2, _) => continue,
            (_, 1) if s >= 2 => "leading-one",
            (_, 1) => continue,
            _ => "leading-digit-at-least-two",
        };
        let required = (s + 1).min(k);
        if a % p.get().pow(required) != 0 {
            let w = Witness::new()
                .with("index", n)
                .with("required", required)
                .with("actual", valuation_u64(a, p));
            return Ok(CriterionVerdict::fail(MAHLER_UD1, Some(k), condition, w));
        }
    }
    Ok(CriterionVerdict::pass(MAHLER_UD1, Some(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;
    use crate::funcspace::{mahler_coefficients, PadicFunction};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn series(prime: u64, k: u32, len: usize, set: &[(usize, u64)]) -> CoefficientSeries {
        let mut terms = vec![0u64; len];
        for &(i, v) in set {
            terms[i] = v;
        }
        CoefficientSeries::new(SeriesKind::Mahler, p(prime), k, terms).unwrap()
    }

    #[test]
    fn polynomial_square_passes() {
        let f = PadicFunction::parse_polynomial("x^2", p(3), 4).unwrap();
        let a = mahler_coefficients(&f, 81, 4).unwrap();
        assert!(mahler_ud1_predicate(&a).unwrap().pass);
    }

    #[test]
    fn p2_a5_four_fails() {
        let v = mahler_ud1_predicate(&series(2, 4, 16, &[(5, 4)])).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        assert_eq!((w.get("index"), w.get("required"), w.get("actual")), (Some("5"), Some("3"), Some("2")));
    }

    #[test]
    fn p3_a6_nine_passes_boundary() {
        // n = 6 = 0 + 2·3: leading digit 2 at s = 1 needs 9 | a_6.
        assert!(mahler_ud1_predicate(&series(3, 4, 81, &[(6, 9)])).unwrap().pass);
        let v = mahler_ud1_predicate(&series(3, 4, 81, &[(6, 3)])).unwrap();
        assert_eq!(v.failed_condition.as_deref(), Some("leading-digit-at-least-two"));
        // n = 4 = 1 + 1·3 carries no condition beyond Lipschitz.
        assert!(mahler_ud1_predicate(&series(3, 4, 81, &[(4, 3)])).unwrap().pass);
        // n = 10 = 1 + 1·9 needs 27.
        let v = mahler_ud1_predicate(&series(3, 4, 81, &[(10, 9)])).unwrap();
        assert_eq!(v.failed_condition.as_deref(), Some("leading-one"));
    }

    #[test]
    fn non_lipschitz_input_is_refused() {
        assert!(mahler_ud1_predicate(&series(3, 3, 27, &[(4, 1)])).is_err());
    }
}
