//! Dynamics of functions on the p-adic integers through their Mahler and van
//! der Put expansions: 1-Lipschitz and differentiability-mod-p checks,
//! measure preservation and ergodicity criteria, and brute-force oracles on
//! Z/p^n to cross-examine them.

pub mod analysis;
pub mod arith;
pub mod cli;
pub mod criteria;
pub mod dynamics;
pub mod error;
pub mod funcspace;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::{CriterionVerdict, Witness};
