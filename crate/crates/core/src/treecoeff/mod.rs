//! The truncated half-tree, its chain complex with coefficients built from a
//! module `W`, and the reduction of translation-fixed classes to level 0.

mod checks;
mod complex;
mod homology;
mod reduce;

pub use checks::{check_cogtri_hypothesis, check_corrpro, check_corrpro_twisted, check_presentation};
pub use complex::{build_complex, build_complex_twisted, level_sign, ChainComplexData, HalfTreeTrunc, RhoChoice};
pub use homology::{fixed_class_lifts, h0_gamma_dim, homology, iota_rank, Homology, H0};
pub use reduce::{random_fixed_class, reduce_chain, support_level, ReduceContext, Reduction};

use crate::grouprep::RepError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("tree computations need e = 1")]
    NeedsField,
    #[error("depth {0} out of range")]
    Depth(u32),
    #[error("bad gluing choice: {0}")]
    BadRho(String),
    #[error("module not generated by N'-invariants")]
    NotGenerated,
    #[error("gluing map is not an isomorphism onto the N-invariants")]
    RhoNotIso,
    #[error("coefficient system axiom fails: {0}")]
    Axiom(String),
    #[error("class not Γ-fixed")]
    NotFixed,
    #[error("reduction identity failed: {0}")]
    AssertionFailed(String),
}
