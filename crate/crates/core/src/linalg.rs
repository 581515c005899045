//! Small shared helpers on complex matrices: Hermitian eigensolves,
//! singular values, and seeded random samples.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// ⟨x, y⟩ = Σ xᵢ · conj(yᵢ), linear in the first argument.
pub fn inner(x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
    assert_eq!(x.len(), y.len(), "inner product length mismatch");
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a * b.conj())
        .sum()
}

pub fn is_hermitian(m: &DMatrix<Complex64>, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|e| e.norm() <= tol)
}

/// (m + m^H) / 2.
pub fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and matching eigenvector columns of a
/// Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    debug_assert!(is_hermitian(m, 1e-9 * (1.0 + m.norm())));
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Largest singular value.
pub fn two_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank with a relative singular-value cutoff.
pub fn rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Dimension of the kernel, via singular values.
pub fn nullity(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    m.ncols() - rank(m, rel_tol)
}

/// Seeded random samples used by the verification oracles.
pub mod sample {
    use super::*;
    use rand::Rng;

    pub fn complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    pub fn hermitian<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
        hermitize(&complex_matrix(rng, n, n))
    }

    /// B·B^H, positive semidefinite by construction.
    pub fn psd<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
        let b = complex_matrix(rng, n, n);
        &b * b.adjoint()
    }

    pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> DVector<Complex64> {
        loop {
            let v = DVector::from_fn(n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let norm = v.norm();
            if norm > 1e-3 {
                return v / Complex64::new(norm, 0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hermitian_eigen_sorted_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = sample::hermitian(&mut rng, 5);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (k, &lam) in vals.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            let residual = (&m * &v - v.scale(lam)).norm();
            assert!(residual < 1e-10, "eigenpair residual {residual}");
        }
    }

    #[test]
    fn psd_samples_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = sample::psd(&mut rng, 4);
            assert!(min_eigenvalue(&p) >= -1e-10);
        }
    }

    #[test]
    fn rank_of_projector() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(2, 2)] = Complex64::new(1.0, 0.0);
        assert_eq!(rank(&m, 1e-9), 2);
        assert_eq!(nullity(&m, 1e-9), 2);
    }
}
