//! The point states of the operator system and their certified
//! evaluations on graded truncations.
//!
//! Error model: a bounded kernel comes with a certified tail bound `t`
//! on `Σ_{n>N} a_n`. Writing `S_g = Σ_{n≤g} a_n`, the normalized
//! boundary kernel vector truncated at depth N differs from the full one
//! by at most `√(t/S_N)·(1 + t/S_N)` in norm, and its window-G slice by
//! at most `√S_G · t / (2·S_N^{3/2})`. Every bound below is assembled
//! from these two estimates plus a cheap upper bound for the operator
//! norm; bounds overestimate, never underestimate.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::inner;
use crate::poly::Poly;
use crate::rkhs::graded::{kernel_vector, multiplier_norm_bound, GradedMatrix};
use crate::rkhs::quadrature::CircleQuadrature;
use crate::series::{CoefficientSequence, Role};

/// Which functional produced a [`StateValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    Phi,
    Psi,
    Delta,
    Omega,
    Tau,
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::Phi => "phi",
            Functional::Psi => "psi",
            Functional::Delta => "delta",
            Functional::Omega => "omega",
            Functional::Tau => "tau",
        }
    }
}

/// A functional evaluation with a certified error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub functional: Functional,
}

/// A finite sum `Σ pᵢ(λ) conj(qᵢ(λ))` of boundary symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySymbol {
    pairs: Vec<(Poly, Poly)>,
}

impl BoundarySymbol {
    pub fn new(pairs: Vec<(Poly, Poly)>) -> Self {
        BoundarySymbol { pairs }
    }

    pub fn single(p: Poly, q: Poly) -> Self {
        BoundarySymbol {
            pairs: vec![(p, q)],
        }
    }

    pub fn identity() -> Self {
        Self::single(Poly::one(), Poly::one())
    }

    pub fn pairs(&self) -> &[(Poly, Poly)] {
        &self.pairs
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.pairs
            .iter()
            .map(|(p, q)| p.eval(lambda) * q.eval(lambda).conj())
            .sum()
    }
}

/// An element of the algebra as the character state sees it: either a
/// boundary symbol, a truncation flagged compact by construction, or an
/// unclassified truncation.
#[derive(Clone, Debug, PartialEq)]
pub enum SElement {
    Symbol(BoundarySymbol),
    Compact(GradedMatrix),
    Unclassified(GradedMatrix),
}

/// `phi(M_p M_q^*) = p(1) · conj(q(1))`, exact.
pub fn state_phi(p: &Poly, q: &Poly) -> StateValue {
    let one = Complex64::new(1.0, 0.0);
    StateValue {
        value: p.eval(one) * q.eval(one).conj(),
        error_bound: 0.0,
        functional: Functional::Phi,
    }
}

fn require_tail(a: &CoefficientSequence) -> Result<f64> {
    a.tail_bound().ok_or(Error::UnboundedAtBoundary)
}

/// Window-slice normalization slack: ‖P_G(k̂_∞ − k̂^{(N)})‖ for the
/// boundary vector, bounded by `√S_G · t / (2 S_N^{3/2})`.
fn slice_slack(sums: &[f64], g: usize, t: f64) -> f64 {
    let s_n = *sums.last().unwrap();
    sums[g].sqrt() * t / (2.0 * s_n.powf(1.5))
}

/// `psi(T) = ⟨T k̂₁, k̂₁⟩` for a graded truncation `T`, understood as
/// zero outside its window.
pub fn state_psi(t: &GradedMatrix, a: &CoefficientSequence) -> Result<StateValue> {
    assert_eq!(a.role(), Role::KernelA);
    let tail = require_tail(a)?;
    let n = a.depth();
    if t.deg_in() > n || t.deg_out() > n {
        return Err(Error::DepthExceeded {
            needed: t.deg_in().max(t.deg_out()),
            depth: n,
        });
    }
    let k = kernel_vector(a, Complex64::new(1.0, 0.0), true)?;
    let x = k.sliced(t.deg_in());
    let y = k.sliced(t.deg_out());
    let value = inner(&t.apply(&x), &y);
    let sums = a.partial_sums();
    let norm = t.op_norm_upper();
    let error_bound =
        norm * (slice_slack(&sums, t.deg_in(), tail) + slice_slack(&sums, t.deg_out(), tail));
    Ok(StateValue {
        value,
        error_bound,
        functional: Functional::Psi,
    })
}

/// `psi(M_p M_q^*)` through the factored form `⟨M_q^* k̂₁, M_p^* k̂₁⟩`,
/// exact on the truncated vector; the bound covers only the vector tail.
pub fn state_psi_product(p: &Poly, q: &Poly, a: &CoefficientSequence) -> Result<StateValue> {
    assert_eq!(a.role(), Role::KernelA);
    let tail = require_tail(a)?;
    let k = kernel_vector(a, Complex64::new(1.0, 0.0), true)?;
    let x = apply_star_to_vec(q, a, k.coords());
    let y = apply_star_to_vec(p, a, k.coords());
    let value = inner(&x, &y);
    let s_n = *a.partial_sums().last().unwrap();
    let nb = multiplier_norm_bound(p, a) * multiplier_norm_bound(q, a);
    let ratio = tail / s_n;
    let error_bound = 2.0 * nb * (ratio.sqrt() + ratio);
    Ok(StateValue {
        value,
        error_bound,
        functional: Functional::Psi,
    })
}

/// `(M_p^* v)[m] = Σ_j conj(p_j) √(a_m/a_{m+j}) v[m+j]`, exact for
/// vectors supported in the depth window.
fn apply_star_to_vec(
    p: &Poly,
    a: &CoefficientSequence,
    v: &DVector<Complex64>,
) -> DVector<Complex64> {
    let n = a.depth();
    assert_eq!(v.len(), n + 1);
    DVector::from_fn(n + 1, |m, _| {
        (0..=p.degree())
            .filter(|j| m + j <= n)
            .map(|j| {
                p.coeff(j).conj()
                    * Complex64::new((a.value(m) / a.value(m + j)).sqrt(), 0.0)
                    * v[m + j]
            })
            .sum()
    })
}

/// The character: boundary symbols evaluate at 1, compact elements
/// evaluate to zero, anything else is ambiguous.
pub fn state_delta(x: &SElement) -> Result<StateValue> {
    let value = match x {
        SElement::Symbol(symbol) => symbol.eval(Complex64::new(1.0, 0.0)),
        SElement::Compact(_) => Complex64::new(0.0, 0.0),
        SElement::Unclassified(_) => return Err(Error::AmbiguousElement),
    };
    Ok(StateValue {
        value,
        error_bound: 0.0,
        functional: Functional::Delta,
    })
}

/// `omega(T) = ∫ ⟨T k̂_λ, k̂_λ⟩ dμ(λ)` over the circle, with the measure
/// given by a quadrature rule. The bound combines the vector tail with
/// the quadrature resolution through the modulus of continuity of the
/// truncated kernel field.
pub fn omega_state(
    a: &CoefficientSequence,
    quad: &CircleQuadrature,
    t: &GradedMatrix,
) -> Result<StateValue> {
    assert_eq!(a.role(), Role::KernelA);
    let tail = require_tail(a)?;
    let n = a.depth();
    if t.deg_in() > n || t.deg_out() > n {
        return Err(Error::DepthExceeded {
            needed: t.deg_in().max(t.deg_out()),
            depth: n,
        });
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (angle, weight) in quad.nodes() {
        let lambda = Complex64::new(angle.cos(), angle.sin());
        let k = kernel_vector(a, lambda, true)?;
        let x = k.sliced(t.deg_in());
        let y = k.sliced(t.deg_out());
        value += Complex64::new(weight, 0.0) * inner(&t.apply(&x), &y);
    }
    let sums = a.partial_sums();
    let norm = t.op_norm_upper();
    let tail_part =
        norm * (slice_slack(&sums, t.deg_in(), tail) + slice_slack(&sums, t.deg_out(), tail));
    let quad_part = match quad.resolution() {
        None => 0.0,
        Some(res) => 2.0 * norm * truncated_modulus(a, res),
    };
    Ok(StateValue {
        value,
        error_bound: tail_part + quad_part,
        functional: Functional::Omega,
    })
}

/// Rigorous bound for `sup_{|Δθ| ≤ res} ‖k̂^{(N)}_λ − k̂^{(N)}_μ‖` on the
/// circle: `m(θ)² = (4/S_N) Σ a_n sin²(nθ/2) ≤ (4/S_N) Σ a_n min(1, (n·θ/2)²)`.
fn truncated_modulus(a: &CoefficientSequence, res: f64) -> f64 {
    let s_n: f64 = a.values().iter().sum();
    let sum: f64 = (1..=a.depth())
        .map(|n| a.value(n) * (n as f64 * res / 2.0).powi(2).min(1.0))
        .sum();
    (4.0 * sum / s_n).sqrt()
}

/// The pairing gap between `M_p M_q^*` and its window-G compression when
/// both are evaluated against the truncated boundary vector:
/// `2 ‖M_p‖‖M_q‖ √((S_N − S_G)/S_N)`.
pub fn product_compression_bound(
    p: &Poly,
    q: &Poly,
    a: &CoefficientSequence,
    window: usize,
) -> f64 {
    let sums = a.partial_sums();
    let s_n = *sums.last().unwrap();
    let nb = multiplier_norm_bound(p, a) * multiplier_norm_bound(q, a);
    2.0 * nb * ((s_n - sums[window]) / s_n).sqrt()
}

/// `alpha = 1/K(1,1)` from the partial sums, with its certified error:
/// `|1/S_N − 1/K| ≤ t/S_N²`.
pub fn alpha_endpoint(a: &CoefficientSequence) -> Result<(f64, f64)> {
    assert_eq!(a.role(), Role::KernelA);
    let tail = require_tail(a)?;
    let s_n: f64 = a.values().iter().sum();
    Ok((1.0 / s_n, tail / (s_n * s_n)))
}

/// Barycentric coordinate of an extension with the given `tau(P_0)`
/// inside the interval of extensions: `t = tau(P_0)/alpha`.
pub fn tau_face_coordinates(tau_p0: f64, a: &CoefficientSequence) -> Result<f64> {
    let (alpha, alpha_err) = alpha_endpoint(a)?;
    let slack = alpha_err + 1e-12;
    if tau_p0 < -slack || tau_p0 > alpha + slack {
        return Err(Error::OutOfFace {
            value: tau_p0,
            alpha,
        });
    }
    Ok((tau_p0 / alpha).clamp(0.0, 1.0))
}
