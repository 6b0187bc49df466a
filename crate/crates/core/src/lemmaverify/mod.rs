//! Verdicts for the representation lemmas on catalog and random instances.

mod eta;
mod qpfpspec;
mod random;
mod report;

pub use eta::{check_herzjesu, check_minimal_generators, EtaMap};
pub use qpfpspec::{check_qpfpspec_i, check_qpfpspec_ii, generated_by_n_invariants};
pub use random::{p_multiple, random_instance_stream, RandomInstance, RandomStream, StreamKind, StreamShape};
pub use report::{Instance, LemmaReport, SubClaim, Verdict, Witness};
