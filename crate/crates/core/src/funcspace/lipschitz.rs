//! 1-Lipschitz checks: v_p(B_m) ≥ ⌊log_p m⌋ (equivalently for a_n), and the
//! direct congruence x ≡ y mod p^n ⇒ f(x) ≡ f(y) mod p^n for tables.

use super::expansion::vdp_coefficients;
use super::function::{first_lipschitz_break, table_size, Form, PadicFunction};
use super::series::CoefficientSeries;
use crate::arith::{floor_log, valuation_u64};
use crate::error::Result;
use crate::verdict::{CriterionVerdict, Witness};

pub const LIPSCHITZ: &str = "1-lipschitz";

/// Checks every stored term; a term whose required valuation reaches the
/// series exponent must vanish mod p^k.
pub fn lipschitz_check_series(series: &CoefficientSeries) -> CriterionVerdict {
    let p = series.prime();
    for (n, &t) in series.terms().iter().enumerate() {
        let need = floor_log(n as u64, p).min(series.exponent());
        if t % p.get().pow(need) != 0 {
            let w = Witness::new()
                .with("index", n)
                .with("required", need)
                .with("actual", valuation_u64(t, p))
                .with("kind", series.kind());
            return CriterionVerdict::fail(LIPSCHITZ, Some(series.exponent()), "coefficient-valuation", w);
        }
    }
    CriterionVerdict::pass(LIPSCHITZ, Some(series.exponent()))
}

pub fn lipschitz_check(f: &PadicFunction) -> Result<CriterionVerdict> {
    let n = f.depth();
    match f.form() {
        Form::Mahler(s) | Form::VanDerPut(s) => {
            let mut v = lipschitz_check_series(&s.reduce_to(n)?);
            v.depth = Some(n);
            Ok(v)
        }
        Form::ValueTable(values) => {
            for level in 1..n {
                if let Some(w) = first_lipschitz_break(values, table_size(f.prime(), level)?) {
                    return Ok(CriterionVerdict::fail(LIPSCHITZ, Some(n), "direct-congruence", w));
                }
            }
            let b = vdp_coefficients(f, table_size(f.prime(), n)?, n)?;
            Ok(lipschitz_check_series(&b))
        }
        Form::Polynomial(_) => {
            let b = vdp_coefficients(f, table_size(f.prime(), n)?, n)?;
            Ok(lipschitz_check_series(&b))
        }
    }
}
