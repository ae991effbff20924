use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::tables::{case_tables, CaseTable};
use crate::error::{Error, Result};
use crate::funcspace::{mahler_coefficients, vdp_coefficients, PadicFunction};
use crate::verdict::{CriterionVerdict, Witness};

pub const DEG8: &str = "deg8-minimal-p3";
pub const MAHLER_P3: &str = "mahler-ergodic-p3";
pub const VDP_P3: &str = "vdp-ergodic-p3";

fn md(x: &BigInt, m: i64) -> i64 {
    i64::try_from(x.mod_floor(&BigInt::from(m))).expect("small modulus")
}

fn nine(values: &[BigInt], what: &str) -> Result<[i64; 9]> {
    if values.len() > 9 && values[9..].iter().any(|v| v != &BigInt::from(0)) {
        return Err(Error::Dimension(format!("{what}: at most 9 entries, got {}", values.len())));
    }
    let mut out = [0i64; 9];
    for (o, v) in out.iter_mut().zip(values) {
        *o = md(v, 9);
    }
    Ok(out)
}

/// Coefficients of a degree ≤ 8 polynomial mod 9 with the selector sums mod 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deg8Stats {
    pub alpha: [i64; 9],
    pub a1: i64,
    pub a2: i64,
    pub d1: i64,
    pub d2: i64,
}

impl Deg8Stats {
    pub fn new(alpha: &[BigInt]) -> Result<Self> {
        let alpha = nine(alpha, "polynomial coefficients")?;
        let a1 = (alpha[1] + alpha[3] + alpha[5] + alpha[7]) % 3;
        let a2 = (alpha[2] + alpha[4] + alpha[6] + alpha[8]) % 3;
        let d1 = (1..9).map(|i| i as i64 * alpha[i]).sum::<i64>() % 3;
        let d2 = (1..9).map(|i| if i % 2 == 1 { i as i64 * alpha[i] } else { -(i as i64) * alpha[i] }).sum::<i64>().rem_euclid(3);
        Ok(Self { alpha, a1, a2, d1, d2 })
    }

    pub fn selector(&self) -> [i64; 6] {
        [self.alpha[0] % 3, self.a1, self.a2, self.alpha[1] % 3, self.d1, self.d2]
    }
}

/// Looks up the selector, then requires both forms of the matching case to
/// be nonzero mod 9.
fn apply_table(name: &str, table: &CaseTable, selector: [i64; 6], vars: &[i64]) -> CriterionVerdict {
    let sel_text = selector.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let Some(case) = table.lookup(&selector) else {
        return CriterionVerdict::fail(name, None, "no-selector-match", Witness::new().with("selector", sel_text));
    };
    for (idx, form) in case.forms.iter().enumerate() {
        if form.eval_mod(vars, 9) == 0 {
            let w = Witness::new().with("case", &case.label).with("form", &case.texts[idx]).with("selector", &sel_text);
            return CriterionVerdict::fail(name, None, &format!("case {} condition {}", case.label, idx + 1), w);
        }
    }
    CriterionVerdict::pass(name, None)
}

/// Transitivity mod 27 of a polynomial of degree ≤ 8 from its coefficients.
pub fn deg8_minimal_p3(alpha: &[BigInt]) -> Result<CriterionVerdict> {
    let st = Deg8Stats::new(alpha)?;
    Ok(apply_table(DEG8, case_tables().table("deg8"), st.selector(), &st.alpha))
}

/// How c6, c7, c8 enter the Mahler case conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ErgbmVariant {
    /// The normalized coefficients c_m = a_m / 3.
    #[serde(rename = "normalized")]
    Normalized,
    /// c_m / 3, which is integral for UD1 maps.
    #[serde(rename = "divided")]
    Divided,
}

impl ErgbmVariant {
    /// The reading recorded in the case-table header.
    pub fn configured() -> Self {
        match case_tables().variants.get("ergbm-c678").map(String::as_str) {
            Some("divided") => Self::Divided,
            _ => Self::Normalized,
        }
    }
}

/// Ergodicity of a UD1 1-Lipschitz map on Z_3 from normalized Mahler
/// coefficients c0..c8. The `Divided` reading needs c6..c8 modulo 27.
pub fn mahler_ergodic_p3(c: &[BigInt], variant: ErgbmVariant) -> Result<CriterionVerdict> {
    let mut vars = nine(c, "Mahler coefficients")?;
    if variant == ErgbmVariant::Divided {
        for m in 6..9 {
            let full = c.get(m).map(|x| md(x, 27)).unwrap_or(0);
            if full % 3 != 0 {
                return Err(Error::NotExact { index: m, required: 1 });
            }
            vars[m] = full / 3;
        }
    }
    let selector = [vars[0] % 3, vars[1] % 3, vars[2] % 3, vars[3] % 3, vars[4] % 3, vars[5] % 3];
    Ok(apply_table(MAHLER_P3, case_tables().table("ergbm"), selector, &vars))
}

/// Ergodicity from normalized van der Put coefficients b0..b8.
pub fn vdp_ergodic_p3(b: &[BigInt]) -> Result<CriterionVerdict> {
    let vars = nine(b, "van der Put coefficients")?;
    let selector = [vars[0] % 3, vars[1] % 3, vars[2] % 3, vars[3] % 3, vars[4] % 3, vars[5] % 3];
    Ok(apply_table(VDP_P3, case_tables().table("ergbm2"), selector, &vars))
}

/// c0..c8 modulo 27; needs depth ≥ 4.
pub fn p3_mahler_inputs(f: &PadicFunction) -> Result<Vec<BigInt>> {
    if f.prime().get() != 3 || f.depth() < 4 {
        return Err(Error::Precondition("needs p = 3 and depth >= 4".into()));
    }
    let s = mahler_coefficients(f, 9, 4)?;
    (0..9).map(|m| Ok(BigInt::from(s.normalized_mod(m, 3)?))).collect()
}

/// b0..b8 modulo 9; needs depth ≥ 3.
pub fn p3_vdp_inputs(f: &PadicFunction) -> Result<Vec<BigInt>> {
    if f.prime().get() != 3 || f.depth() < 3 {
        return Err(Error::Precondition("needs p = 3 and depth >= 3".into()));
    }
    let s = vdp_coefficients(f, 9, 3)?;
    (0..9).map(|m| Ok(BigInt::from(s.normalized_mod(m, 2)?))).collect()
}
