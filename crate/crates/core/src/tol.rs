//! Default numerical tolerances, shared across modules.
//!
//! Every threshold used by a verification routine is named here rather
//! than inlined at the call site.

/// Exact graded identities evaluated in f64.
///
/// The graded truncations are exact on their domains, so residuals are
/// pure rounding noise; 1e-12 leaves three orders of headroom over the
/// accumulation expected at desk depths.
pub const EXACT: f64 = 1e-12;

/// Pick coefficient positivity floor.
///
/// The reciprocal-series recursion is forward-stable at desk depths, so
/// genuine coefficients never dip below -1e-12 in f64.
pub const PICK: f64 = 1e-12;

/// Eigenvalue floor for positive-semidefinite checks.
///
/// Hermitian eigensolves of forms that cancel to zero leave residual
/// eigenvalues of order n·eps; -1e-10 is conservative for n ≤ 500.
pub const PSD: f64 = 1e-10;

/// Target for tail-bounded convergence sweeps at moderate depth.
pub const SWEEP: f64 = 1e-6;

/// Residual target for boundary identity sweeps at depth 2000.
///
/// Boundary sums of power-law kernels converge like 1/N; at N = 2000 the
/// observed residuals sit near 1e-6, three orders inside this target.
pub const BOUNDARY_SWEEP: f64 = 1e-3;

/// Relative cutoff for singular values when counting rank or nullity.
pub const RANK: f64 = 1e-9;
