//! Verifications of the operator identities: the rank-one formula, the
//! strong-operator kernel sum, the positivity of the multiplier forms,
//! and norm continuity of the boundary kernel field.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use crate::poly::Poly;
use crate::rkhs::graded::{fn_coords, h_inner, kernel_vector, mp_matrix, mp_star_window, mpq_compressed};
use crate::rkhs::quadrature::CircleQuadrature;
use crate::rkhs::states::{
    omega_state, product_compression_bound, state_delta, state_phi, state_psi_product,
    BoundarySymbol, SElement, StateValue,
};
use crate::series::{invert_to_b, kernel_value, CoefficientSequence, Role};

/// Residual of `M_p P_0 M_q^* f = ⟨f, q⟩ · p` in the graded basis;
/// both sides are computed independently and the distance returned.
pub fn rank_one_identity_check(
    p: &Poly,
    q: &Poly,
    f_taylor: &[Complex64],
    a: &CoefficientSequence,
) -> Result<f64> {
    assert_eq!(a.role(), Role::KernelA);
    assert!(!f_taylor.is_empty());
    let df = f_taylor.len() - 1;
    if df > a.depth() {
        return Err(Error::DepthExceeded {
            needed: df,
            depth: a.depth(),
        });
    }

    // left side: matrices all the way
    let f_coords = nalgebra::DVector::from_fn(df + 1, |n, _| {
        f_taylor[n] / Complex64::new(a.value(n).sqrt(), 0.0)
    });
    let x = mp_star_window(q, a, df) * &f_coords;
    let mut projected = nalgebra::DVector::zeros(df + 1);
    projected[0] = x[0];
    let lhs = mp_matrix(p, a, df)?.apply(&projected);

    // right side: inner product times the coordinates of p
    let ip = h_inner(f_taylor, q.coeffs(), a);
    let p_coords = fn_coords(p, a)?;
    let mut rhs = nalgebra::DVector::zeros(df + p.degree() + 1);
    for n in 0..p_coords.len() {
        rhs[n] = ip * p_coords[n];
    }

    Ok((lhs - rhs).norm())
}

/// Residuals `|Σ_{n≤N'} b_n (μλ̄)ⁿ · K_{N'}(μ,λ) − (K_{N'}(μ,λ) − 1)|`
/// for each requested truncation. Boundary pairs need a tail bound.
pub fn sot_sum_kernel_residuals(
    a: &CoefficientSequence,
    lambda: Complex64,
    mu: Complex64,
    depths: &[usize],
) -> Result<Vec<f64>> {
    assert_eq!(a.role(), Role::KernelA);
    assert!(lambda.norm() <= 1.0 + 1e-12 && mu.norm() <= 1.0 + 1e-12);
    let x = mu * lambda.conj();
    if x.norm() >= 1.0 - 1e-12 && a.tail_bound().is_none() {
        return Err(Error::UnboundedAtBoundary);
    }
    let max = *depths.iter().max().unwrap_or(&0);
    if max > a.depth() {
        return Err(Error::DepthExceeded {
            needed: max,
            depth: a.depth(),
        });
    }
    let b = invert_to_b(a);

    let mut out = vec![0.0; depths.len()];
    let mut kernel = Complex64::new(0.0, 0.0);
    let mut b_sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 0..=max {
        kernel += Complex64::new(a.value(n), 0.0) * pow;
        if n >= 1 {
            b_sum += Complex64::new(b.value(n), 0.0) * pow;
        }
        pow *= x;
        for (slot, &d) in out.iter_mut().zip(depths.iter()) {
            if d == n {
                *slot = (b_sum * kernel - (kernel - Complex64::new(1.0, 0.0))).norm();
            }
        }
    }
    Ok(out)
}

/// Minimum eigenvalues of the restricted forms
/// `I − Σ_{k=1}^{n} b_k M_{z^k} M_{z^k}^*` and the same minus `P_0`,
/// both compressed to grades `≤ m` through exact rectangular factors.
pub fn pick_multiplier_psd_check(
    a: &CoefficientSequence,
    m: usize,
    n: usize,
) -> Result<(f64, f64)> {
    assert_eq!(a.role(), Role::KernelA);
    if m + n > a.depth() {
        return Err(Error::DepthExceeded {
            needed: m + n,
            depth: a.depth(),
        });
    }
    let b = invert_to_b(a);
    let mut form = DMatrix::<Complex64>::identity(m + 1, m + 1);
    for k in 1..=n.min(m) {
        // rectangular factor of M_{z^k} landing exactly on grades ≤ m
        let c = mp_matrix(&Poly::monomial(k), a, m - k)?;
        let outer = c.entries() * c.entries().adjoint();
        form -= outer.map(|e| e * Complex64::new(b.value(k), 0.0));
    }
    let lam_sigma = min_eigenvalue(&form);
    form[(0, 0)] -= Complex64::new(1.0, 0.0);
    let lam_sigma_p0 = min_eigenvalue(&form);
    Ok((lam_sigma, lam_sigma_p0))
}

/// Two routes to `‖k̂_λ − k̂_μ‖` (coordinates vs the closed form through
/// kernel values) with the combined certificate for their gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuityCheck {
    pub direct: f64,
    pub closed_form: f64,
    pub residual: f64,
    pub bound: f64,
}

pub fn kernel_continuity_check(
    a: &CoefficientSequence,
    lambda: Complex64,
    mu: Complex64,
) -> Result<ContinuityCheck> {
    let k_lambda = kernel_vector(a, lambda, true)?;
    let k_mu = kernel_vector(a, mu, true)?;
    let direct = (k_lambda.coords() - k_mu.coords()).norm();

    let (k_ml, _) = kernel_value(a, mu, lambda)?;
    let (k_ll, _) = kernel_value(a, lambda, lambda)?;
    let (k_mm, _) = kernel_value(a, mu, mu)?;
    let ratio = k_ml / Complex64::new((k_ll.re * k_mm.re).sqrt(), 0.0);
    let closed_form = (2.0 - 2.0 * ratio.re).max(0.0).sqrt();

    // both routes sit within these tail envelopes of the full quantity
    let t = a.tail_bound().unwrap_or(0.0);
    let s_min = k_ll.re.min(k_mm.re).max(1.0);
    let bound = 4.0 * (t / s_min).sqrt() + 2.0 * t / s_min + 1e-12;

    Ok(ContinuityCheck {
        direct,
        closed_form,
        residual: (direct - closed_form).abs(),
        bound,
    })
}

/// Agreement of the extensions with the base state on one product
/// element `M_p M_q^*`.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub phi: Complex64,
    pub psi: StateValue,
    pub delta: StateValue,
    pub omega: StateValue,
    /// Certified slack for the omega comparison: its own bound plus the
    /// window-compression gap of the product element.
    pub omega_slack: f64,
    pub max_deviation: f64,
    pub within_bounds: bool,
}

/// Evaluate `phi`, `psi`, `delta` and point-mass `omega` on
/// `M_p M_q^*` and compare everything to `phi` within certified slack.
pub fn extension_consistency(
    p: &Poly,
    q: &Poly,
    a: &CoefficientSequence,
    omega_window: usize,
) -> Result<ConsistencyReport> {
    let phi = state_phi(p, q).value;
    let psi = state_psi_product(p, q, a)?;
    let delta = state_delta(&SElement::Symbol(BoundarySymbol::single(
        p.clone(),
        q.clone(),
    )))?;
    let t = mpq_compressed(p, q, a, omega_window)?;
    let omega = omega_state(a, &CircleQuadrature::point_mass(0.0), &t)?;
    let omega_slack = omega.error_bound + product_compression_bound(p, q, a, omega_window);

    let dev_psi = (psi.value - phi).norm();
    let dev_delta = (delta.value - phi).norm();
    let dev_omega = (omega.value - phi).norm();
    let within_bounds = dev_psi <= psi.error_bound
        && dev_delta <= 1e-12
        && dev_omega <= omega_slack;
    Ok(ConsistencyReport {
        phi,
        psi,
        delta,
        omega,
        omega_slack,
        max_deviation: dev_psi.max(dev_delta).max(dev_omega),
        within_bounds,
    })
}
