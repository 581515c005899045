//! Faces of density-matrix feasibility sets: support reduction, affine
//! dimension, and ranges of linear functionals.
//!
//! Two tiers. The exact tier applies support reduction: a constraint
//! `Tr(G·T) = 0` with `G ⪰ 0` on the current support forces the support
//! of every feasible `T` into `ker G`; iterating to a fixed point often
//! resolves the face completely, and everything downstream is then exact
//! eigenvalue arithmetic on the compressed observables. Constraints that
//! survive reduction are handled by alternating projections between the
//! affine slice and the semidefinite cone, and the results are labeled
//! not certified.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, hermitize, is_hermitian};

const PSD_FLOOR: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-10;
const TARGET_TOL: f64 = 1e-9;
const AFFINE_TOL: f64 = 1e-9;
const PROJECTION_BUDGET: usize = 10_000;

/// A Hermitian observable paired with a required expectation value.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    observable: DMatrix<Complex64>,
    target: f64,
}

impl LinearConstraint {
    pub fn new(observable: DMatrix<Complex64>, target: f64) -> Result<Self> {
        if !is_hermitian(&observable, 1e-9 * (1.0 + observable.norm())) {
            return Err(Error::InvalidSpec(
                "constraint observable must be Hermitian".into(),
            ));
        }
        Ok(LinearConstraint {
            observable: hermitize(&observable),
            target,
        })
    }

    pub fn observable(&self) -> &DMatrix<Complex64> {
        &self.observable
    }

    pub fn target(&self) -> f64 {
        self.target
    }
}

/// A Hermitian, positive semidefinite, trace-one matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !is_hermitian(&entries, 1e-12 * (1.0 + entries.norm())) {
            return Err(Error::InvalidSpec("density matrix must be Hermitian".into()));
        }
        let entries = hermitize(&entries);
        let eigs = hermitian_eigenvalues(&entries);
        if eigs[0] < -PSD_FLOOR {
            return Err(Error::InvalidSpec(format!(
                "density matrix has eigenvalue {}",
                eigs[0]
            )));
        }
        let trace: Complex64 = entries.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "density matrix trace is {trace}"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `Tr(G·T)`, real for Hermitian `G`.
    pub fn expectation(&self, g: &DMatrix<Complex64>) -> f64 {
        (g * &self.entries).trace().re
    }
}

/// Which solver tier produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveTier {
    Exact,
    Iterative,
}

impl SolveTier {
    pub fn name(&self) -> &'static str {
        match self {
            SolveTier::Exact => "exact",
            SolveTier::Iterative => "iterative",
        }
    }
}

/// The resolved face of feasible density matrices.
#[derive(Clone, Debug)]
pub struct FaceDescription {
    pub support_projection: DMatrix<Complex64>,
    pub affine_dimension: usize,
    pub extreme_param: String,
    pub feasible_sample: DensityMatrix,
    pub tier: SolveTier,
    pub certified: bool,
}

/// Extremes of a linear functional over the face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionalRange {
    pub min: f64,
    pub max: f64,
    pub tier: SolveTier,
    pub certified: bool,
}

/// Orthonormal columns spanning the forced support.
fn support_basis(constraints: &[LinearConstraint], n: usize) -> Result<DMatrix<Complex64>> {
    let mut basis = DMatrix::<Complex64>::identity(n, n);
    loop {
        let mut changed = false;
        for c in constraints {
            if c.target.abs() > 1e-12 || basis.ncols() == 0 {
                continue;
            }
            let compressed = hermitize(&(basis.adjoint() * &c.observable * &basis));
            let scale = 1.0 + compressed.norm();
            if compressed.norm() <= 1e-12 * (1.0 + c.observable.norm()) {
                continue; // already annihilated on the support
            }
            let (vals, vecs) = hermitian_eigen(&compressed);
            if vals[0] < -PSD_FLOOR * scale {
                continue; // not positive on the support; no forcing
            }
            let kernel: Vec<usize> = (0..vals.len())
                .filter(|&i| vals[i] <= KERNEL_TOL * scale)
                .collect();
            if kernel.len() == vals.len() {
                continue;
            }
            let cols: Vec<_> = kernel
                .iter()
                .map(|&i| vecs.column(i).into_owned())
                .collect();
            basis = if cols.is_empty() {
                DMatrix::zeros(n, 0)
            } else {
                &basis * DMatrix::from_columns(&cols)
            };
            changed = true;
        }
        if !changed {
            break;
        }
    }
    if basis.ncols() == 0 {
        return Err(Error::EmptyFace);
    }
    Ok(basis)
}

/// Orthogonal projection onto the support every feasible matrix must
/// live in.
pub fn support_reduce(
    constraints: &[LinearConstraint],
    n: usize,
) -> Result<DMatrix<Complex64>> {
    let basis = support_basis(constraints, n)?;
    Ok(&basis * basis.adjoint())
}

/// Constraints still active after compression to the support. A
/// vanishing compressed observable with a nonzero target is a certified
/// infeasibility.
fn compress_constraints(
    constraints: &[LinearConstraint],
    basis: &DMatrix<Complex64>,
) -> Result<Vec<(DMatrix<Complex64>, f64)>> {
    let mut kept = Vec::new();
    for c in constraints {
        let compressed = hermitize(&(basis.adjoint() * &c.observable * basis));
        if compressed.norm() <= 1e-10 * (1.0 + c.observable.norm()) {
            if c.target.abs() > TARGET_TOL {
                return Err(Error::Infeasible(format!(
                    "observable vanishes on the support but the target is {}",
                    c.target
                )));
            }
            continue;
        }
        kept.push((compressed, c.target));
    }
    Ok(kept)
}

// svec coordinates: Hermitian r×r ↔ ℝ^{r²}, isometric for the Frobenius
// norm (off-diagonal entries carry √2).

fn herm_to_vec(m: &DMatrix<Complex64>) -> DVector<f64> {
    let r = m.nrows();
    let mut v = DVector::zeros(r * r);
    let mut idx = 0;
    for k in 0..r {
        v[idx] = m[(k, k)].re;
        idx += 1;
    }
    let s = 2.0f64.sqrt();
    for k in 0..r {
        for l in (k + 1)..r {
            v[idx] = s * m[(k, l)].re;
            v[idx + 1] = s * m[(k, l)].im;
            idx += 2;
        }
    }
    v
}

fn vec_to_herm(v: &DVector<f64>, r: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(r, r);
    let mut idx = 0;
    for k in 0..r {
        m[(k, k)] = Complex64::new(v[idx], 0.0);
        idx += 1;
    }
    let s = 1.0 / 2.0f64.sqrt();
    for k in 0..r {
        for l in (k + 1)..r {
            let e = Complex64::new(v[idx] * s, v[idx + 1] * s);
            m[(k, l)] = e;
            m[(l, k)] = e.conj();
            idx += 2;
        }
    }
    m
}

/// Row such that `row · herm_to_vec(T) = Tr(G·T)`.
fn functional_row(g: &DMatrix<Complex64>) -> DVector<f64> {
    herm_to_vec(g)
}

/// Frobenius-nearest positive semidefinite matrix.
fn psd_project(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (vals, vecs) = hermitian_eigen(m);
    let clamped = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0), 0.0)),
    ));
    hermitize(&(&vecs * clamped * vecs.adjoint()))
}

struct AffineSystem {
    rows: DMatrix<f64>,
    rhs: DVector<f64>,
    /// Aᵀ(AAᵀ)⁺, cached for repeated projections.
    gain: DMatrix<f64>,
}

impl AffineSystem {
    /// Trace row plus one row per kept constraint.
    fn new(kept: &[(DMatrix<Complex64>, f64)], r: usize) -> Self {
        let mut rows = DMatrix::zeros(1 + kept.len(), r * r);
        let mut rhs = DVector::zeros(1 + kept.len());
        rows.row_mut(0)
            .copy_from(&functional_row(&DMatrix::identity(r, r)).transpose());
        rhs[0] = 1.0;
        for (i, (g, target)) in kept.iter().enumerate() {
            rows.row_mut(i + 1).copy_from(&functional_row(g).transpose());
            rhs[i + 1] = *target;
        }
        let gram = &rows * rows.transpose();
        let pinv = gram
            .clone()
            .svd(true, true)
            .pseudo_inverse(1e-12)
            .expect("pseudo inverse of a small Gram matrix");
        let gain = rows.transpose() * pinv;
        AffineSystem { rows, rhs, gain }
    }

    fn rank(&self) -> usize {
        let sv = self.rows.clone().svd(false, false).singular_values;
        let top = sv.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > 1e-10 * top).count()
    }

    /// Least-squares point of the affine system, or the residual if the
    /// system is inconsistent.
    fn solve(&self) -> std::result::Result<DVector<f64>, f64> {
        let x = self
            .rows
            .clone()
            .svd(true, true)
            .solve(&self.rhs, 1e-12)
            .expect("svd solve");
        let residual = (&self.rows * &x - &self.rhs).norm();
        if residual > 1e-8 {
            Err(residual)
        } else {
            Ok(x)
        }
    }

    fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        v - &self.gain * (&self.rows * v - &self.rhs)
    }

    fn residual(&self, v: &DVector<f64>) -> f64 {
        (&self.rows * v - &self.rhs).norm()
    }
}

/// Alternating projection between the affine slice and the PSD cone.
fn feasible_point(
    system: &AffineSystem,
    start: DVector<f64>,
    r: usize,
    budget: usize,
) -> std::result::Result<DMatrix<Complex64>, f64> {
    let mut v = start;
    let mut last_residual = f64::INFINITY;
    for _ in 0..budget {
        let affine = system.project(&v);
        let psd = psd_project(&vec_to_herm(&affine, r));
        let w = herm_to_vec(&psd);
        last_residual = system.residual(&w);
        if last_residual <= AFFINE_TOL {
            return Ok(psd);
        }
        v = w;
    }
    Err(last_residual)
}

/// Resolve the face: support, affine dimension, extreme-point
/// parameterization, and one feasible sample.
pub fn face_dimension(constraints: &[LinearConstraint], n: usize) -> Result<FaceDescription> {
    let basis = support_basis(constraints, n)?;
    let r = basis.ncols();
    let kept = compress_constraints(constraints, &basis)?;
    let system = AffineSystem::new(&kept, r);
    let affine_dimension = r * r - system.rank();
    let support_projection = &basis * basis.adjoint();

    if kept.is_empty() {
        let sample = DensityMatrix::new(support_projection.map(|e| e / r as f64))?;
        return Ok(FaceDescription {
            support_projection,
            affine_dimension,
            extreme_param: "unit vectors in the support, modulo unimodular phase".into(),
            feasible_sample: sample,
            tier: SolveTier::Exact,
            certified: true,
        });
    }

    let start = system.solve().map_err(|res| {
        Error::Infeasible(format!("affine system inconsistent (residual {res:.2e})"))
    })?;
    let t = feasible_point(&system, start, r, PROJECTION_BUDGET).map_err(|res| {
        Error::Infeasible(format!(
            "not certified: alternating projection stalled at residual {res:.2e} after {PROJECTION_BUDGET} steps"
        ))
    })?;
    let sample = DensityMatrix::new(hermitize(&(&basis * t * basis.adjoint())))?;
    Ok(FaceDescription {
        support_projection,
        affine_dimension,
        extreme_param: "not characterized at the iterative tier".into(),
        feasible_sample: sample,
        tier: SolveTier::Iterative,
        certified: false,
    })
}

/// Extremes of `Tr(H·T)` over the face. Exact when support reduction
/// resolves every constraint: the range is then spanned by the extreme
/// eigenvalues of the compressed objective.
pub fn functional_range(
    constraints: &[LinearConstraint],
    objective: &DMatrix<Complex64>,
    n: usize,
) -> Result<FunctionalRange> {
    if !is_hermitian(objective, 1e-9 * (1.0 + objective.norm())) {
        return Err(Error::InvalidSpec("objective must be Hermitian".into()));
    }
    let basis = support_basis(constraints, n)?;
    let r = basis.ncols();
    let compressed = hermitize(&(basis.adjoint() * objective * &basis));
    let kept = compress_constraints(constraints, &basis)?;

    if kept.is_empty() {
        let vals = hermitian_eigenvalues(&compressed);
        return Ok(FunctionalRange {
            min: vals[0],
            max: vals[r - 1],
            tier: SolveTier::Exact,
            certified: true,
        });
    }

    let system = AffineSystem::new(&kept, r);
    let start = system.solve().map_err(|res| {
        Error::Infeasible(format!("affine system inconsistent (residual {res:.2e})"))
    })?;
    let base = feasible_point(&system, start, r, PROJECTION_BUDGET).map_err(|res| {
        Error::Infeasible(format!(
            "not certified: alternating projection stalled at residual {res:.2e} after {PROJECTION_BUDGET} steps"
        ))
    })?;
    let direction = functional_row(&compressed);
    let objective_of = |m: &DMatrix<Complex64>| (&compressed * m).trace().re;

    let mut min = objective_of(&base);
    let mut max = min;
    for sign in [1.0f64, -1.0] {
        let mut current = herm_to_vec(&base);
        for step in 1..=300usize {
            let eta = 0.5 / (step as f64).sqrt();
            let shifted = &current + &direction * (sign * eta);
            match feasible_point(&system, shifted, r, 400) {
                Ok(m) => {
                    let value = objective_of(&m);
                    min = min.min(value);
                    max = max.max(value);
                    current = herm_to_vec(&m);
                }
                Err(_) => break,
            }
        }
    }
    Ok(FunctionalRange {
        min,
        max,
        tier: SolveTier::Iterative,
        certified: false,
    })
}
