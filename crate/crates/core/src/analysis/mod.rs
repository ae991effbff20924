//! Uniform differentiability modulo p: the direct congruence sweep, the van
//! der Put relations and the Mahler coefficient divisibilities, which must
//! all agree.

mod mahler;
pub(crate) mod ud1;

pub use mahler::{mahler_ud1_predicate, MAHLER_UD1};
pub use ud1::{
    default_s_max, ud1_check, ud1_equivalence_crosscheck, vdp_ud1_relations_check, DerivedFunction,
    EquivalenceReport, Ud1Outcome, UD1, VDP_UD1,
};
