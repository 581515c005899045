//! Exact graded truncations of multiplication operators, kernel vectors,
//! the states built from them, and the operator identities connecting
//! the two.
//!
//! The orthonormal monomial basis is `e_n = √a_n · zⁿ`. Every operator
//! is held as a rectangular matrix between graded subspaces
//! `span{e_0..e_D}`; codomains carry enough headroom that the finite
//! identities are exact and the only approximation left is the kernel
//! tail.

mod checks;
mod graded;
mod quadrature;
mod states;

pub use checks::{
    extension_consistency, kernel_continuity_check, pick_multiplier_psd_check,
    rank_one_identity_check, sot_sum_kernel_residuals, ConsistencyReport, ContinuityCheck,
};
pub use graded::{
    fn_coords, h_inner, kernel_vector, mp_matrix, mpq_compressed, multiplier_norm_bound,
    mz_matrix, p0_matrix, GradedMatrix, KernelVector,
};
pub use quadrature::CircleQuadrature;
pub use states::{
    alpha_endpoint, omega_state, product_compression_bound, state_delta, state_phi, state_psi,
    state_psi_product, tau_face_coordinates, BoundarySymbol, Functional, SElement, StateValue,
};
