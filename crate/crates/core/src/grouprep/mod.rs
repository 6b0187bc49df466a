//! The groups `SL_2(F_p)` and `GL_2(F_p)` and finitely generated modules over them.

mod catalog;
mod group;
mod jbar;
mod module;

use std::sync::Arc;

pub use catalog::{
    builtin_catalog, random_jbar_quotient, ActionRecord, Catalog, CatalogEntry, CatalogFile, ModuleRecord,
    CATALOG_FORMAT, CATALOG_VERSION,
};
pub use group::{Elem, GroupData, GroupKind, Subgroup};
pub use jbar::{
    composition_length, composition_length_with, constants, decompose_jbar, is_irreducible, jbar, steinberg,
    steinberg_quotient, JBar, Summand,
};
pub use module::{h1_procyclic, induce_cyclic, CyclicModule, GModule, Presentation, ProcyclicH1};

use crate::exactalg::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),
    #[error("operator is not invertible")]
    NotInvertible,
    #[error("submodule is not stable under the action")]
    NotStable,
    #[error("level {level} exceeds depth {depth}")]
    LevelExceedsDepth { level: u32, depth: u32 },
    #[error("operation needs e = 1")]
    NeedsField,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("catalog error: {0}")]
    Catalog(String),
}

pub fn build_group(kind: GroupKind, p: u32) -> Result<Arc<GroupData>, RepError> {
    Ok(Arc::new(GroupData::build(kind, p)?))
}
