//! Exact arithmetic over Q: polynomials, reduced rational functions,
//! subresultant gcd/resultant, square-free factorization and partial fractions.

mod gcd;
mod partial;
mod poly;
mod ratfun;

pub use gcd::{
    ext_gcd, inverse_mod, is_perfect_square, is_squarefree, poly_gcd, power_sums, rat_sqrt,
    resultant, squarefree_factorization, squarefree_part, trace,
};
pub use partial::{partial_fractions, partial_fractions_over, FractionTerm, PartialFractions};
pub use poly::{Poly, QPoly};
pub use ratfun::RatFun;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("pole of order {multiplicity} at factor {factor}; only simple and double poles are Fuchsian")]
    PoleOrderTooHigh { factor: String, multiplicity: usize },
    #[error("denominator factors are not pairwise coprime")]
    FactorsNotCoprime,
}
