//! Closed-form ergodicity criteria for p = 2, 3, the p ≥ 5 generator, and
//! checkers for the binomial congruences they rest on.

mod identities;
mod p2;
mod p3;
mod p5;
mod tables;

pub use p2::{
    larin_transitive_mod8, mahler_ergodic_p2, p2_mahler_inputs, p2_vdp_inputs, vdp_ergodic_p2, CubicCoeffs, LARIN,
    MAHLER_P2, VDP_P2,
};
pub use p3::{
    deg8_minimal_p3, mahler_ergodic_p3, p3_mahler_inputs, p3_vdp_inputs, vdp_ergodic_p3, Deg8Stats, ErgbmVariant, DEG8,
    MAHLER_P3, VDP_P3,
};
pub use tables::{case_tables, parse_form, AffineForm, Case, CaseTable, CaseTables};
pub use p5::{
    cycle_to_map, ergp5_conditions, lifted_orbit_value, mahler_to_power_mod_p2, mainp5_linear_form, mainp5_matrix,
    mainp5_system, p5_generate, random_instance, random_lift, Ergp5Report, P5Generation, P5Instance, ERGP5,
};
pub use identities::{abc_sums, pzero_sum, verify_identity_suite, Counterexample, IdentityReport, Suite};
