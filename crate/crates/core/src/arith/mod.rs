//! Exact and modular arithmetic: primes, valuations, binomials, residues and
//! linear algebra over F_p.

mod binomial_mod;
mod matrix;
mod natural;
mod prime;
mod residue;

pub use binomial_mod::{
    binomial_mod_exact, binomial_valuation_legendre, harmonic_mod, legendre_binomial_valuation,
    lucas_binomial_mod_p, lucas_u64, padded_digits, PrimePowerBinomial,
};
pub use matrix::{solve_fp, FpMatrix, SolveOutcome};
pub use natural::{
    ball_exponent, binomial, binomial_int, digit_sum, floor_log, leading_digit, m_minus, p_digits,
    valuation, valuation_int, valuation_u64, Natural, Valuation,
};
pub use prime::{primes_in, Prime};
pub use residue::{small, Modulus, Residue};
