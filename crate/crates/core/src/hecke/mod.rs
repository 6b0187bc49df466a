//! The finite Hecke algebra of `GL_2(F_p)` acting on `jbar`, right modules
//! over it, the tensor functor `K`, and the projectivity test for `jbar`.

mod algebra;
mod checks;
mod module;

pub use algebra::{build_hecke, HeckeAlgebra};
pub use checks::{
    check_associativity, check_flatness, check_hecke_dim, check_vytastra, find_section, invariants_jbar_star,
    FlatnessResult,
};
pub use module::{random_quotient_module, tensor_k, HeckeModule, TensorModule};
