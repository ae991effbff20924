//! Finite-depth functions on Z_p and their Mahler / van der Put expansions.

mod expansion;
mod function;
mod lipschitz;
mod polynomial;
mod series;

pub use expansion::{
    basis_change_amn, basis_change_anm, chi, mahler_coefficients, vdp_coefficients, mahler_to_vdp,
    vdp_to_mahler,
};
pub use function::{default_depth, max_depth, table_size, Form, PadicFunction, DEFAULT_MAX_DEPTH, TABLE_LIMIT};
pub use lipschitz::{lipschitz_check, lipschitz_check_series, LIPSCHITZ};
pub use polynomial::{IntPolynomial, ReducedPolynomial};
pub use series::{CoefficientSeries, SeriesDocument, SeriesKind};
