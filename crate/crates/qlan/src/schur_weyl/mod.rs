//! Brute-force verification of the Schur-Weyl machinery on `(C^d)^⊗n` for
//! small `d` and `n`: Young diagrams and tableaux, row/column symmetrizers,
//! tableau basis vectors, determinant inner-product identities, orbit
//! counting, and the block probabilities of tensor-power states.

pub mod checks;
pub mod operators;
pub mod tableau;

pub use checks::{
    block_probabilities, count_v0, failures, formula_v0, quasi_orthogonality_zero,
    run_verification, CheckRecord, QuasiOrthCheck,
};
pub use operators::{
    apply_diagonal_power, basis_vector, det_inner_product, projector, sparse_dot, sparse_norm,
    young_vector, ProjectorKind, SparseVec, TensorOperator, TensorSpace, DIM_MAX,
};
pub use tableau::{
    enumerate_ssyt, syt_dim, syt_dim_hooks, weyl_dim, MultiplicityMatrix, YoungDiagram,
};
