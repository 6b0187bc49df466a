//! Exact linear algebra over `Z/p^e`.

mod howell;
mod mat;
mod ring;
mod sparse;
mod split;

pub use howell::{
    howell_form, image, kernel, preimage, solve, span_size, CanonicalBasis, HowellTransform, Pivot,
};
pub use mat::{vec_add, vec_is_zero, vec_scale, vec_sub, Mat};
pub use ring::{RingSpec, SUPPORTED_PRIMES};
pub use sparse::{
    dense_to_sparse, sparse_echelon, sparse_howell, sparse_kernel, sparse_length, sparse_to_dense, SparseBasis, SparseMat, SparseSolver,
    SparseVec,
};
pub use split::split_test;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unsupported ring Z/{p}^{e}")]
    UnsupportedRing { p: u32, e: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a surjection")]
    NotSurjection,
}
