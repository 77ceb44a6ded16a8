//! Generalized ladder algebras on truncated index windows.
//!
//! The algebra is generated by a raising operator R, a lowering operator L
//! and a diagonal S with `[L,R] = S`, `[L,S] = 2σL`, `[S,R] = 2σR`, realised
//! through weights λ_j with `λ_j² = σ(α+j)(β+j)` or through one of the
//! limiting profiles. The crate builds the matrices, exponentiates them by
//! brute force, evaluates the normal and anti-normal ordered products,
//! the expectation functions G_n and G_nm, exact coefficient diagrams,
//! SU(2) rotation matrices and the phase-operator Bessel identities.

pub mod algebra;
pub mod bigfloat;
pub mod error;
pub mod expm;
pub mod factorization;
pub mod gn;
pub mod linalg;
pub mod phase;
pub mod rotations;
pub mod special;
pub mod triangles;

pub use algebra::{
    build_matrices, commutator_residual, detect_blocks, lambda, lambda_sq, AlgebraSpec, Block,
    IndexWindow, LadderMatrices, Profile,
};
pub use error::{LadderError, Result};
pub use expm::{default_pad, expm, oracle_element, oracle_window, pad_sufficiency, Coeffs, ExpmResult};
pub use factorization::{
    factorization_residual, tau, u1_antinormal, u1_factors, u1_normal, u2_antinormal, u2_factors,
    u2_normal, Ordering, U1Factors, U2Factors,
};
pub use gn::{
    a_n, gn_closed, gn_series, gn_sho_limit, gnm, recursion_residual, tilde_bar_variants,
    GnEvaluation, Route, Variant,
};
pub use special::bessel_jn;
