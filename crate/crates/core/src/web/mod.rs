//! Symmetry webs for torus actions on positively curved manifolds, seen
//! through the isotropy representation at a fixed point.
//!
//! A model is an `r × n/2` integer weight matrix `W`. An involution
//! `v ∈ Z_2^r` acts on plane `i` by `(−1)^{⟨v, w_i⟩}`, so every fixed-point
//! computation reduces to parities of the columns.

mod checker;
mod model;
mod search;

use thiserror::Error;

pub use checker::{check_result, CheckReport};
pub use model::{
    exhaustive_models, from_bits, random_model, to_bits, ExhaustiveModels, FixedSetDescriptor, GammaGraph,
    IsotropyModel, PairReport, Web, MAX_PLANES, MAX_RANK,
};
pub use search::{
    case5_chain, find_certificate, induction_gate, Case5Claims, Case5Trace, Certificate, ChainStep, GateDecision, KernelNote,
    Leaf, NamedInvolution, Reduction, SearchMode, WebResult, MAX_ATTEMPTS,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WebError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("effectiveness lost: {0}")]
    EffectivenessLoss(String),
    #[error("rank bound violated after reduction: {0}")]
    RankBoundViolated(String),
    #[error("degenerate model: {0}")]
    ModelDegenerate(String),
}
