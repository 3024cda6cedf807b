//! The Bockstein-free mod-`p` Steenrod algebra.
//!
//! Elements are `Z_p`-combinations of composition monomials in the `Sq^i`
//! (`p = 2`) or the reduced powers `P^i` (odd `p`). [`adem_reduce`] rewrites
//! any homogeneous element to its unique admissible normal form.

mod action;
mod adem;
mod binomial;
mod decompose;
mod element;
mod monomial;
mod parse;
mod prime;

pub use action::{PolyAction, Polynomial};
pub use adem::{adem_reduce, adem_relation, algebra, AdemAlgebra};
pub use binomial::binom_mod_p;
pub use decompose::{
    hit_decompose, leading_coefficient_check, p_adic_split, sq_power_of_two_decomposition,
    HitDecomposition, LeadingCoefficient, PadicSplit, SqDecomposition,
};
pub use element::SteenrodElement;
pub use monomial::{admissible_monomials, Monomial};
pub use parse::{parse_element, ParseError};
pub use prime::{Prime, MAX_PRIME};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("{0} is not a supported prime")]
    NotPrime(u32),
    #[error("an odd prime is required, got {0}")]
    NotOddPrime(u32),
    #[error("elements over different primes ({0} and {1}) cannot be combined")]
    PrimeMismatch(u32, u32),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("k must be at least 1")]
    ZeroDegree,
    #[error("m = {m} is outside 1..={lambda}")]
    InvalidM { m: u64, lambda: u64 },
    #[error("base case: mu = 0 and m = lambda, so P^k = P^(m p^a) needs no leading coefficient")]
    BaseCase,
    #[error("leading coefficient mismatch: Adem route gives {direct}, digit formula gives {closed_form}")]
    LeadingCoefficientMismatch { direct: u32, closed_form: u32 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}
