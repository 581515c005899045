//! Graded matrices: exact rectangular truncations of operators between
//! polynomial subspaces, and kernel vectors in the same basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{CoefficientSequence, Role};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A matrix of an operator from `span{e_0..e_{deg_in}}` into
/// `span{e_0..e_{deg_out}}`, entries in the orthonormal monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMatrix {
    entries: DMatrix<Complex64>,
    deg_in: usize,
    deg_out: usize,
}

impl GradedMatrix {
    pub fn new(entries: DMatrix<Complex64>, deg_in: usize, deg_out: usize) -> Self {
        assert_eq!(entries.nrows(), deg_out + 1, "row count must be deg_out + 1");
        assert_eq!(entries.ncols(), deg_in + 1, "column count must be deg_in + 1");
        GradedMatrix {
            entries,
            deg_in,
            deg_out,
        }
    }

    pub fn zeros(deg_in: usize, deg_out: usize) -> Self {
        Self::new(DMatrix::zeros(deg_out + 1, deg_in + 1), deg_in, deg_out)
    }

    /// Rectangular identity: the inclusion of the domain grades, zero
    /// rows appended above.
    pub fn identity(deg_in: usize, deg_out: usize) -> Self {
        assert!(deg_out >= deg_in);
        let mut m = Self::zeros(deg_in, deg_out);
        for k in 0..=deg_in {
            m.entries[(k, k)] = C_ONE;
        }
        m
    }

    pub fn deg_in(&self) -> usize {
        self.deg_in
    }

    pub fn deg_out(&self) -> usize {
        self.deg_out
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Composition `self ∘ rhs`; the inner grades must match exactly.
    pub fn compose(&self, rhs: &GradedMatrix) -> GradedMatrix {
        assert_eq!(
            self.deg_in, rhs.deg_out,
            "composition grade mismatch: {} vs {}",
            self.deg_in, rhs.deg_out
        );
        GradedMatrix::new(&self.entries * &rhs.entries, rhs.deg_in, self.deg_out)
    }

    /// Conjugate transpose; swaps the grades.
    pub fn adjoint(&self) -> GradedMatrix {
        GradedMatrix::new(self.entries.adjoint(), self.deg_out, self.deg_in)
    }

    /// Embed into a larger codomain by appending zero rows (exact).
    pub fn pad_out(&self, deg_out: usize) -> GradedMatrix {
        assert!(deg_out >= self.deg_out);
        let mut m = DMatrix::zeros(deg_out + 1, self.deg_in + 1);
        m.view_mut((0, 0), (self.deg_out + 1, self.deg_in + 1))
            .copy_from(&self.entries);
        GradedMatrix::new(m, self.deg_in, deg_out)
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(v.len(), self.deg_in + 1);
        &self.entries * v
    }

    pub fn add(&self, rhs: &GradedMatrix) -> GradedMatrix {
        assert_eq!((self.deg_in, self.deg_out), (rhs.deg_in, rhs.deg_out));
        GradedMatrix::new(&self.entries + &rhs.entries, self.deg_in, self.deg_out)
    }

    pub fn sub(&self, rhs: &GradedMatrix) -> GradedMatrix {
        assert_eq!((self.deg_in, self.deg_out), (rhs.deg_in, rhs.deg_out));
        GradedMatrix::new(&self.entries - &rhs.entries, self.deg_in, self.deg_out)
    }

    pub fn scale(&self, c: Complex64) -> GradedMatrix {
        GradedMatrix::new(self.entries.map(|e| e * c), self.deg_in, self.deg_out)
    }

    /// Cheap upper bound for the operator two-norm:
    /// min(‖·‖_F, √(‖·‖₁·‖·‖_∞)).
    pub fn op_norm_upper(&self) -> f64 {
        let fro = self.entries.norm();
        let mut col_max: f64 = 0.0;
        for j in 0..self.entries.ncols() {
            col_max = col_max.max(self.entries.column(j).iter().map(|e| e.norm()).sum());
        }
        let mut row_max: f64 = 0.0;
        for i in 0..self.entries.nrows() {
            row_max = row_max.max(self.entries.row(i).iter().map(|e| e.norm()).sum());
        }
        fro.min((col_max * row_max).sqrt())
    }
}

/// The rank-one projection onto the constants, compressed to the given
/// window.
pub fn p0_matrix(deg_in: usize, deg_out: usize) -> GradedMatrix {
    let mut m = GradedMatrix::zeros(deg_in, deg_out);
    m.entries[(0, 0)] = C_ONE;
    m
}

/// Matrix of multiplication by `z` on grades `≤ deg_in`: the weighted
/// shift with weights `w_n = √(a_n / a_{n+1})`. Exact; the codomain
/// grade grows by one.
pub fn mz_matrix(a: &CoefficientSequence, deg_in: usize) -> Result<GradedMatrix> {
    assert_eq!(a.role(), Role::KernelA);
    let deg_out = deg_in + 1;
    if deg_out > a.depth() {
        return Err(Error::DepthExceeded {
            needed: deg_out,
            depth: a.depth(),
        });
    }
    let mut m = GradedMatrix::zeros(deg_in, deg_out);
    for n in 0..=deg_in {
        let w = (a.value(n) / a.value(n + 1)).sqrt();
        m.entries[(n + 1, n)] = Complex64::new(w, 0.0);
    }
    Ok(m)
}

/// Matrix of multiplication by `p` on grades `≤ deg_in`. Exact:
/// `M_p e_n = Σ_j p_j √(a_n/a_{n+j}) e_{n+j}`.
pub fn mp_matrix(p: &Poly, a: &CoefficientSequence, deg_in: usize) -> Result<GradedMatrix> {
    assert_eq!(a.role(), Role::KernelA);
    let dp = p.degree();
    let deg_out = deg_in + dp;
    if deg_out > a.depth() {
        return Err(Error::DepthExceeded {
            needed: deg_out,
            depth: a.depth(),
        });
    }
    let mut m = GradedMatrix::zeros(deg_in, deg_out);
    for n in 0..=deg_in {
        for j in 0..=dp {
            let w = (a.value(n) / a.value(n + j)).sqrt();
            m.entries[(n + j, n)] += p.coeff(j) * Complex64::new(w, 0.0);
        }
    }
    Ok(m)
}

/// Matrix of `M_p^*` compressed to grades `≤ window`:
/// `F[m, j] = conj(p_{j-m}) √(a_m / a_j)`. The compression is exact on
/// its domain because `M_p^*` lowers grades.
pub(crate) fn mp_star_window(
    p: &Poly,
    a: &CoefficientSequence,
    window: usize,
) -> DMatrix<Complex64> {
    let dp = p.degree();
    DMatrix::from_fn(window + 1, window + 1, |m, j| {
        if j >= m && j - m <= dp {
            p.coeff(j - m).conj() * Complex64::new((a.value(m) / a.value(j)).sqrt(), 0.0)
        } else {
            C_ZERO
        }
    })
}

/// Exact compression of `M_p M_q^*` to grades `≤ window` (in and out).
pub fn mpq_compressed(
    p: &Poly,
    q: &Poly,
    a: &CoefficientSequence,
    window: usize,
) -> Result<GradedMatrix> {
    assert_eq!(a.role(), Role::KernelA);
    if window > a.depth() {
        return Err(Error::DepthExceeded {
            needed: window,
            depth: a.depth(),
        });
    }
    let fp = mp_star_window(p, a, window);
    let fq = mp_star_window(q, a, window);
    Ok(GradedMatrix::new(fp.adjoint() * fq, window, window))
}

/// Upper bound for the multiplier norm of `p`:
/// `Σ_j |p_j| · sup_n √(a_n / a_{n+j})`, the supremum taken over the
/// available window (exact for monotone-ratio families).
pub fn multiplier_norm_bound(p: &Poly, a: &CoefficientSequence) -> f64 {
    let n = a.depth();
    (0..=p.degree())
        .map(|j| {
            let sup = (0..=n.saturating_sub(j))
                .map(|m| (a.value(m) / a.value(m + j)).sqrt())
                .fold(0.0, f64::max);
            p.coeff(j).norm() * sup
        })
        .sum()
}

/// A kernel vector in coordinates: entry `n` is `√a_n · w̄ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelVector {
    coords: DVector<Complex64>,
    point: Complex64,
    normalized: bool,
}

impl KernelVector {
    pub fn coords(&self) -> &DVector<Complex64> {
        &self.coords
    }

    pub fn point(&self) -> Complex64 {
        self.point
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The first `deg + 1` coordinates.
    pub fn sliced(&self, deg: usize) -> DVector<Complex64> {
        assert!(deg < self.coords.len());
        DVector::from_fn(deg + 1, |n, _| self.coords[n])
    }
}

/// The (optionally normalized) kernel vector at `w`, truncated at the
/// sequence depth. Boundary points need a certified tail bound.
pub fn kernel_vector(
    a: &CoefficientSequence,
    w: Complex64,
    normalized: bool,
) -> Result<KernelVector> {
    assert_eq!(a.role(), Role::KernelA);
    let r = w.norm();
    assert!(r <= 1.0 + 1e-12, "kernel point must lie in the closed disc");
    if r >= 1.0 - 1e-12 && a.tail_bound().is_none() {
        return Err(Error::UnboundedAtBoundary);
    }
    let n = a.depth();
    let wc = w.conj();
    let mut coords = DVector::zeros(n + 1);
    let mut pow = C_ONE;
    for k in 0..=n {
        coords[k] = Complex64::new(a.value(k).sqrt(), 0.0) * pow;
        pow *= wc;
    }
    if normalized {
        let norm = coords.norm();
        coords /= Complex64::new(norm, 0.0);
    }
    Ok(KernelVector {
        coords,
        point: w,
        normalized,
    })
}

/// Coordinates of the polynomial `p` as a vector of the space:
/// entry `n` is `p_n / √a_n`.
pub fn fn_coords(p: &Poly, a: &CoefficientSequence) -> Result<DVector<Complex64>> {
    if p.degree() > a.depth() {
        return Err(Error::DepthExceeded {
            needed: p.degree(),
            depth: a.depth(),
        });
    }
    Ok(DVector::from_fn(p.degree() + 1, |n, _| {
        p.coeff(n) / Complex64::new(a.value(n).sqrt(), 0.0)
    }))
}

/// Inner product of the space on Taylor coefficient lists:
/// `⟨f, g⟩ = Σ f̂(n) conj(ĝ(n)) / a_n`.
pub fn h_inner(fhat: &[Complex64], ghat: &[Complex64], a: &CoefficientSequence) -> Complex64 {
    let top = fhat.len().max(ghat.len()) - 1;
    assert!(top <= a.depth(), "coefficients exceed depth");
    let get = |list: &[Complex64], n: usize| list.get(n).copied().unwrap_or(C_ZERO);
    (0..=top)
        .map(|n| get(fhat, n) * get(ghat, n).conj() / Complex64::new(a.value(n), 0.0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use crate::series::{coeffs_a, SpaceSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hs(s: f64, depth: usize) -> CoefficientSequence {
        coeffs_a(&SpaceSpec::hs(s, depth)).unwrap()
    }

    #[test]
    fn mz_weights_flat_scale() {
        let a = hs(0.0, 10);
        let m = mz_matrix(&a, 4).unwrap();
        assert_eq!(m.deg_out(), 5);
        for n in 0..=4 {
            assert_eq!(m.entries()[(n + 1, n)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn mz_weights_inverse_square() {
        let a = hs(-2.0, 10);
        let m = mz_matrix(&a, 3).unwrap();
        for n in 0..=3usize {
            let expected = (n as f64 + 2.0) / (n as f64 + 1.0);
            assert!((m.entries()[(n + 1, n)].re - expected).abs() < 1e-14);
        }
        // ‖M_z 1‖ must equal ‖z‖ = 1/√a_1
        let e0 = DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let mz1 = m.apply(&e0);
        assert!((mz1.norm() - 1.0 / a.value(1).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mz_explicit_weight() {
        let a = coeffs_a(&SpaceSpec::explicit(vec![1.0, 4.0])).unwrap();
        let m = mz_matrix(&a, 0).unwrap();
        assert!((m.entries()[(1, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mz_depth_guard() {
        let a = hs(0.0, 3);
        assert!(matches!(
            mz_matrix(&a, 3),
            Err(Error::DepthExceeded { needed: 4, depth: 3 })
        ));
    }

    #[test]
    fn mp_of_one_is_rectangular_identity() {
        let a = hs(-2.0, 6);
        let m = mp_matrix(&Poly::one(), &a, 4).unwrap();
        assert_eq!(m, GradedMatrix::identity(4, 4));
    }

    #[test]
    fn mp_double_shift_on_flat_scale() {
        let a = hs(0.0, 10);
        let m = mp_matrix(&Poly::monomial(2), &a, 2).unwrap();
        assert_eq!(m.deg_out(), 4);
        for n in 0..=2 {
            assert_eq!(m.entries()[(n + 2, n)], Complex64::new(1.0, 0.0));
        }
        assert_eq!(m.entries()[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mp_one_plus_z_inverse_square() {
        let a = hs(-2.0, 6);
        let m = mp_matrix(&Poly::from_real(&[1.0, 1.0]), &a, 1).unwrap();
        // column 0: e_0 + w_0 e_1 with w_0 = 2
        assert!((m.entries()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((m.entries()[(1, 0)].re - 2.0).abs() < 1e-15);
        // column 1: e_1 + w_1 e_2 with w_1 = 3/2
        assert!((m.entries()[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!((m.entries()[(2, 1)].re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn mp_matches_mz_for_z() {
        let a = hs(-1.5, 12);
        let via_p = mp_matrix(&Poly::z(), &a, 7).unwrap();
        let via_z = mz_matrix(&a, 7).unwrap();
        assert!((via_p.entries() - via_z.entries()).norm() < 1e-15);
    }

    #[test]
    fn graded_multiplicativity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = hs(-2.0, 60);
        for _ in 0..20 {
            let p = Poly::random(&mut rng, 4, 1.0);
            let q = Poly::random(&mut rng, 3, 1.0);
            let deg_in = 10;
            let mq = mp_matrix(&q, &a, deg_in).unwrap();
            let mp = mp_matrix(&p, &a, mq.deg_out()).unwrap();
            let mpq = mp_matrix(&p.mul(&q), &a, deg_in).unwrap();
            let residual = (mp.compose(&mq).entries() - mpq.entries()).norm();
            assert!(residual < 1e-12, "residual {residual}");
        }
    }

    #[test]
    fn kernel_vector_origin_and_boundary() {
        let a = hs(-2.0, 5);
        let k0 = kernel_vector(&a, Complex64::new(0.0, 0.0), false).unwrap();
        assert_eq!(k0.coords()[0], Complex64::new(1.0, 0.0));
        for n in 1..=5 {
            assert_eq!(k0.coords()[n], Complex64::new(0.0, 0.0));
        }

        let k1 = kernel_vector(&a, Complex64::new(1.0, 0.0), true).unwrap();
        assert!((k1.coords().norm() - 1.0).abs() < 1e-12);
        // coordinates proportional to √a_n = 1/(n+1)
        let ratio = k1.coords()[0].re;
        for n in 0..=5 {
            assert!((k1.coords()[n].re - ratio / (n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_vector_boundary_needs_tail() {
        let a = hs(0.0, 5);
        assert!(matches!(
            kernel_vector(&a, Complex64::new(1.0, 0.0), false),
            Err(Error::UnboundedAtBoundary)
        ));
    }

    #[test]
    fn kernel_vector_unnormalized_norm_is_partial_kernel() {
        let a = hs(-2.0, 100);
        let w = Complex64::new(0.6, -0.3);
        let k = kernel_vector(&a, w, false).unwrap();
        let (kw, bound) = crate::series::kernel_value(&a, w, w).unwrap();
        assert!((k.coords().norm_squared() - kw.re).abs() <= bound + 1e-12);
    }

    #[test]
    fn reproducing_property_exact_for_polynomials() {
        let a = hs(0.0, 10);
        let w = Complex64::new(0.5, 0.0);
        let k = kernel_vector(&a, w, false).unwrap();
        let p = Poly::monomial(2);
        let coords = fn_coords(&p, &a).unwrap();
        let mut padded = DVector::zeros(11);
        for i in 0..coords.len() {
            padded[i] = coords[i];
        }
        let val = inner(&padded, k.coords());
        assert!((val - Complex64::new(0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn adjoint_eigenvector_property() {
        // M_p^* k_w = conj(p(w)) k_w, exact on guard-banded windows
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = hs(-2.0, 80);
        for _ in 0..10 {
            let p = Poly::random(&mut rng, 5, 1.0);
            let w = Complex64::new(0.35, 0.41);
            let deg = 40;
            let mp = mp_matrix(&p, &a, deg).unwrap();
            let k = kernel_vector(&a, w, false).unwrap();
            let lhs = mp.adjoint().apply(&k.sliced(mp.deg_out()));
            let rhs = k.sliced(deg).map(|c| c * p.eval(w).conj());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn mpq_compression_is_hermitian_for_equal_factors() {
        let a = hs(-2.0, 30);
        let p = Poly::from_real(&[1.0, 2.0, 0.5]);
        let t = mpq_compressed(&p, &p, &a, 20).unwrap();
        assert!(crate::linalg::is_hermitian(t.entries(), 1e-12));
    }

    #[test]
    fn mpq_compression_matches_factored_form() {
        // compare against M_p (M_q e_k · guard band) computed column-wise
        let a = hs(-1.0, 40);
        let p = Poly::from_real(&[0.5, 1.0]);
        let q = Poly::from_real(&[1.0, -1.0, 0.25]);
        let window = 12;
        let t = mpq_compressed(&p, &q, &a, window).unwrap();
        // independent route: T[j,k] = Σ_m (M_q^* e_k)[m] conj((M_p^* e_j)[m])
        for j in 0..=window {
            for k in 0..=window {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..=window {
                    let qs = if k >= m && k - m <= q.degree() {
                        q.coeff(k - m).conj()
                            * Complex64::new((a.value(m) / a.value(k)).sqrt(), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let ps = if j >= m && j - m <= p.degree() {
                        p.coeff(j - m).conj()
                            * Complex64::new((a.value(m) / a.value(j)).sqrt(), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    acc += qs * ps.conj();
                }
                assert!((t.entries()[(j, k)] - acc).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn multiplier_norm_bound_dominates_window_norm() {
        let a = hs(-2.0, 40);
        let p = Poly::from_real(&[1.0, -2.0, 0.7]);
        let m = mp_matrix(&p, &a, 30).unwrap();
        let bound = multiplier_norm_bound(&p, &a);
        assert!(crate::linalg::two_norm(m.entries()) <= bound + 1e-10);
    }
}
