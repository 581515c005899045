//! Row tuples `[X_1 ⋯ X_d]` of square blocks: contraction and
//! co-isometry checks, the splitting of a non-extreme contraction into
//! an average of two co-isometries, and commutant-based irreducibility.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitize, nullity};
use crate::tol;

/// A `d`-tuple of `n×n` blocks viewed as the row operator `[X_1 ⋯ X_d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RowTuple {
    blocks: Vec<DMatrix<Complex64>>,
}

impl RowTuple {
    pub fn new(blocks: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::InvalidSpec("a row tuple needs d ≥ 2 blocks".into()));
        }
        let n = blocks[0].nrows();
        for b in &blocks {
            if !b.is_square() || b.nrows() != n {
                return Err(Error::InvalidSpec(
                    "row tuple blocks must be square of equal size".into(),
                ));
            }
        }
        Ok(RowTuple { blocks })
    }

    /// Scalar tuple (n = 1).
    pub fn scalar(lambda: &[Complex64]) -> Result<Self> {
        Self::new(
            lambda
                .iter()
                .map(|&v| DMatrix::from_element(1, 1, v))
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    /// The `n × n·d` row matrix.
    pub fn row_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let d = self.d();
        let mut m = DMatrix::zeros(n, n * d);
        for (i, b) in self.blocks.iter().enumerate() {
            m.view_mut((0, i * n), (n, n)).copy_from(b);
        }
        m
    }

    fn from_row_matrix(m: &DMatrix<Complex64>, d: usize) -> Self {
        let n = m.nrows();
        let blocks = (0..d)
            .map(|i| m.view((0, i * n), (n, n)).into_owned())
            .collect();
        RowTuple { blocks }
    }

    /// `I − Σ X_i X_i^*`.
    fn defect(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut acc = DMatrix::<Complex64>::identity(n, n);
        for b in &self.blocks {
            acc -= b * b.adjoint();
        }
        hermitize(&acc)
    }
}

/// Contraction/co-isometry report for a row tuple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowContractionReport {
    pub is_contraction: bool,
    pub is_coisometry: bool,
    /// Spectral norm of `I − Σ X_i X_i^*`.
    pub defect_norm: f64,
}

pub fn row_contraction_check(x: &RowTuple) -> RowContractionReport {
    let eigs = hermitian_eigenvalues(&x.defect());
    let min = eigs[0];
    let defect_norm = eigs.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    RowContractionReport {
        is_contraction: min >= -tol::PSD,
        is_coisometry: defect_norm <= tol::PSD,
        defect_norm,
    }
}

/// Split a strict row contraction of full row rank into the average of
/// two distinct row co-isometries.
///
/// With the polar data `X = P·U` (`P = |X^*|`, `U` a co-isometry under
/// the rank assumption), the outputs are `(P ± i√(I−P²))·U`.
pub fn coisometry_split(x: &RowTuple) -> Result<(RowTuple, RowTuple)> {
    let row = x.row_matrix();
    let n = x.n();
    let svd = row.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let sigma = &svd.singular_values;

    let sigma_max = sigma.iter().copied().fold(0.0f64, f64::max);
    if sigma_max > 1.0 + tol::PSD {
        return Err(Error::InvalidSpec(format!(
            "not a row contraction: largest singular value {sigma_max}"
        )));
    }
    if sigma.iter().any(|&s| s <= 1e-10) {
        return Err(Error::RankDeficient);
    }
    if sigma.iter().all(|&s| (1.0 - s).abs() <= tol::PSD) {
        return Err(Error::AlreadyExtreme);
    }

    // P = U_s Σ U_s^H, Q = U_s √(I−Σ²) U_s^H, co-isometric factor U_s V_t
    let diag = |f: &dyn Fn(f64) -> f64| {
        DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            sigma.iter().map(|&s| Complex64::new(f(s), 0.0)),
        ))
    };
    let p = u * diag(&|s| s) * u.adjoint();
    let q = u * diag(&|s| (1.0 - s * s).max(0.0).sqrt()) * u.adjoint();
    let w = u * v_t;

    let i = Complex64::new(0.0, 1.0);
    let y = (&p + q.map(|e| e * i)) * &w;
    let z = (&p - q.map(|e| e * i)) * &w;
    Ok((
        RowTuple::from_row_matrix(&y, x.d()),
        RowTuple::from_row_matrix(&z, x.d()),
    ))
}

/// Commutant dimension of `{X_i, X_i^*}` and irreducibility.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutantReport {
    pub commutant_dimension: usize,
    pub is_irreducible: bool,
}

/// Solve `{M : M X_i = X_i M, M X_i^* = X_i^* M}` as a complex linear
/// system; the tuple is irreducible exactly when only scalars commute.
pub fn irreducibility_check(x: &RowTuple) -> CommutantReport {
    let n = x.n();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut rows: Vec<DMatrix<Complex64>> = Vec::with_capacity(2 * x.d());
    for b in x.blocks() {
        for m in [b.clone(), b.adjoint()] {
            // vec(M·A − A·M) = (Aᵀ ⊗ I − I ⊗ A)·vec(M), column-major vec
            rows.push(m.transpose().kronecker(&id) - id.kronecker(&m));
        }
    }
    let mut stacked = DMatrix::<Complex64>::zeros(rows.len() * n * n, n * n);
    for (i, r) in rows.iter().enumerate() {
        stacked.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(r);
    }
    let dim = nullity(&stacked, tol::RANK).max(1);
    CommutantReport {
        commutant_dimension: dim,
        is_irreducible: dim == 1,
    }
}

/// Seeded strict row contraction of full row rank (used by the
/// randomized verification runs).
pub fn random_strict_contraction<R: rand::Rng>(rng: &mut R, n: usize, d: usize) -> RowTuple {
    loop {
        let raw = crate::linalg::sample::complex_matrix(rng, n, n * d);
        let norm = crate::linalg::two_norm(&raw);
        let scale = rng.gen_range(0.35..0.9) / norm;
        let m = raw.map(|e| e * Complex64::new(scale, 0.0));
        let sv = crate::linalg::singular_values(&m);
        if sv.last().copied().unwrap_or(0.0) > 1e-6 {
            return RowTuple::from_row_matrix(&m, d);
        }
    }
}
