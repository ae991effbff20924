//! Brute-force permutation oracles on Z/p^n and the prime-independent
//! measure-preservation and ergodicity criteria.

mod cycles;
mod ergodic;
mod mcri;
mod measure;

pub use cycles::{bijective_mod, is_transitive_table, transitive_mod, CycleReport};
pub use ergodic::{ergodic_oracle, ergodic_ud, ergodic_ud_with_mu, mu, ErgodicityDecision, Evidence, Method};
pub use mcri::{mcri_conditions, LevelProduct, McriReport};
pub use measure::{
    lambda, measure_preserving_p2_bundled, measure_preserving_ud_odd, measure_preserving_ud_p2,
    measure_preserving_ud_p2_mahler, measure_preserving_vdp, MP_P2, MP_P2_MAHLER, MP_UD_ODD, MP_VDP,
};
