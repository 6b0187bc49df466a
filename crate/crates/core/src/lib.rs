//! Exact verification of mod-p representation and tree coefficient computations.

pub mod exactalg;
pub mod grouprep;
pub mod lemmaverify;
pub mod treecoeff;
pub mod hecke;
