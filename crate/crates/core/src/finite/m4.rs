//! The built-in 4×4 example pair, the algebra its span generates, and
//! the extension face of the state it pins at the origin.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::face::{face_dimension, functional_range, FaceDescription, FunctionalRange, LinearConstraint};
use crate::linalg;
use crate::tol;

/// The example pair: `A = diag(0,0,1,1)` and the symmetric `B` with
/// entries 2 and 1 coupling the two diagonal blocks.
pub fn build_example_matrices() -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = DMatrix::from_diagonal(&DVector::from_iterator(
        4,
        [0.0, 0.0, 1.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let rows: [[f64; 4]; 4] = [
        [0.0, 0.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [2.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
    ];
    let b = DMatrix::from_fn(4, 4, |i, j| Complex64::new(rows[i][j], 0.0));
    (a, b)
}

/// Complex dimension of the span of all products of the generators and
/// their adjoints, per product length `1..=max_len`.
///
/// The generator list must contain the identity, so the dimension at
/// length L covers every shorter product as well.
pub fn word_span_dimensions(generators: &[DMatrix<Complex64>], max_len: usize) -> Vec<usize> {
    assert!(max_len >= 1);
    let n = generators
        .first()
        .expect("at least one generator")
        .nrows();
    for g in generators {
        assert!(g.is_square() && g.nrows() == n, "generators must be square of equal size");
    }
    let identity = DMatrix::<Complex64>::identity(n, n);
    assert!(
        generators.iter().any(|g| (g - &identity).norm() < 1e-12),
        "generator list must contain the identity"
    );

    let mut gens: Vec<DMatrix<Complex64>> = generators.to_vec();
    for g in generators {
        let adj = g.adjoint();
        if !gens.iter().any(|h| (h - &adj).norm() < 1e-12) {
            gens.push(adj);
        }
    }
    assert!(
        gens.len().pow(max_len as u32) <= 200_000,
        "word enumeration budget exceeded"
    );

    let flatten = |m: &DMatrix<Complex64>| -> Vec<Complex64> { m.iter().copied().collect() };
    let mut rows: Vec<Vec<Complex64>> = vec![flatten(&identity)];
    let mut frontier: Vec<DMatrix<Complex64>> = vec![identity];
    let mut dims = Vec::with_capacity(max_len);
    for _ in 1..=max_len {
        let mut next = Vec::with_capacity(frontier.len() * gens.len());
        for w in &frontier {
            for g in &gens {
                let prod = w * g;
                rows.push(flatten(&prod));
                next.push(prod);
            }
        }
        frontier = next;
        let stacked = DMatrix::from_fn(rows.len(), n * n, |i, j| rows[i][j]);
        dims.push(linalg::rank(&stacked, tol::RANK).min(n * n));
    }
    dims
}

/// Span dimension at the final length.
pub fn word_span_dimension(generators: &[DMatrix<Complex64>], max_len: usize) -> usize {
    *word_span_dimensions(generators, max_len).last().unwrap()
}

/// The extension face of the origin state together with the ranges of
/// both coordinate functionals over it.
#[derive(Clone, Debug)]
pub struct M4FaceReport {
    pub face: FaceDescription,
    pub alpha_range: FunctionalRange,
    pub beta_range: FunctionalRange,
}

/// Resolve the face pinned by `Tr(A·T) = 0` and `Tr(B·T) = 0`.
pub fn m4_face_analysis() -> Result<M4FaceReport> {
    let (a, b) = build_example_matrices();
    let constraints = vec![
        LinearConstraint::new(a.clone(), 0.0)?,
        LinearConstraint::new(b.clone(), 0.0)?,
    ];
    let face = face_dimension(&constraints, 4)?;
    let alpha_range = functional_range(&constraints, &a, 4)?;
    let beta_range = functional_range(&constraints, &b, 4)?;
    Ok(M4FaceReport {
        face,
        alpha_range,
        beta_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face::SolveTier;

    #[test]
    fn example_matrices_shape() {
        let (a, b) = build_example_matrices();
        let eigs_a = linalg::hermitian_eigenvalues(&a);
        assert_eq!(eigs_a.iter().filter(|&&v| v.abs() < 1e-12).count(), 2);
        assert_eq!(eigs_a.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count(), 2);
        assert!(linalg::is_hermitian(&b, 1e-15));
        // kernel of A is the first two coordinates
        for j in 0..2 {
            assert_eq!(a[(j, j)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn word_span_of_identity_alone() {
        let gens = vec![DMatrix::<Complex64>::identity(3, 3)];
        assert_eq!(word_span_dimension(&gens, 3), 1);
    }

    #[test]
    fn word_span_commutative_pair() {
        let i2 = DMatrix::<Complex64>::identity(2, 2);
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            2,
            [1.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let dims = word_span_dimensions(&[i2, d], 4);
        assert_eq!(dims, vec![2, 2, 2, 2]);
    }

    #[test]
    fn word_span_example_generates_everything() {
        // the span grows 3, 6, 10, 13, 15 and stabilizes at the full
        // 16 = dim M₄ from length 6 on
        let (a, b) = build_example_matrices();
        let gens = vec![DMatrix::<Complex64>::identity(4, 4), a, b];
        let dims = word_span_dimensions(&gens, 7);
        assert_eq!(dims, vec![3, 6, 10, 13, 15, 16, 16]);
        // non-decreasing, constant once two consecutive lengths agree
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        if let Some(pos) = dims.windows(2).position(|w| w[0] == w[1]) {
            assert!(dims[pos..].windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn face_analysis_matches_expected_geometry() {
        let report = m4_face_analysis().unwrap();
        assert_eq!(linalg::rank(&report.face.support_projection, 1e-9), 2);
        assert_eq!(report.face.affine_dimension, 3);
        assert_eq!(report.face.tier, SolveTier::Exact);
        assert!(report.face.extreme_param.contains("modulo unimodular phase"));
        assert!(report.beta_range.min.abs() < 1e-9 && report.beta_range.max.abs() < 1e-9);
        assert!(report.alpha_range.min.abs() < 1e-9 && report.alpha_range.max.abs() < 1e-9);
    }
}
