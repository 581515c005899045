//! Joint numerical range boundary by support functions: for each angle,
//! a top eigenvector of `cosθ·A + sinθ·B` yields the boundary point
//! `(⟨Ax,x⟩, ⟨Bx,x⟩)`; the convex hull of the points approximates the
//! range from inside.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, inner, is_hermitian};

/// One support point of the joint range.
#[derive(Clone, Debug)]
pub struct NumericalRangePoint {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub witness: DVector<Complex64>,
    /// Set when the top eigenspace was degenerate at this angle; the
    /// point is then an arbitrary choice inside a boundary flat and the
    /// hull remains valid.
    pub degenerate: bool,
}

/// Support points in angular order over a uniform grid.
pub fn numerical_range_boundary(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    grid: usize,
) -> Result<Vec<NumericalRangePoint>> {
    if grid < 4 {
        return Err(Error::InvalidSpec("grid must be at least 4".into()));
    }
    if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
        return Err(Error::InvalidSpec("matrices must be square of equal size".into()));
    }
    if !is_hermitian(a, 1e-9 * (1.0 + a.norm())) || !is_hermitian(b, 1e-9 * (1.0 + b.norm())) {
        return Err(Error::InvalidSpec("matrices must be Hermitian".into()));
    }
    let n = a.nrows();
    let mut out = Vec::with_capacity(grid);
    for k in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
        let h = a.map(|e| e * Complex64::new(theta.cos(), 0.0))
            + b.map(|e| e * Complex64::new(theta.sin(), 0.0));
        let (vals, vecs) = hermitian_eigen(&h);
        let top = vals[n - 1];
        let tol = 1e-10 * (1.0 + top.abs());
        // ties broken deterministically: the first eigenvector whose
        // eigenvalue reaches the top within tolerance
        let idx = (0..n).find(|&i| vals[i] >= top - tol).unwrap();
        let degenerate = n >= 2 && vals[n - 2] >= top - tol;
        let x = vecs.column(idx).into_owned();
        let alpha = inner(&(a * &x), &x).re;
        let beta = inner(&(b * &x), &x).re;
        out.push(NumericalRangePoint {
            theta,
            alpha,
            beta,
            witness: x,
            degenerate,
        });
    }
    Ok(out)
}

/// Convex hull (Andrew monotone chain), counterclockwise, no repeated
/// endpoint. Collinear interior points are dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-15 && (p.1 - q.1).abs() < 1e-15);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether a point lies in the hull, up to a signed tolerance. Handles
/// the degenerate hulls (point, segment) directly.
pub fn hull_contains(hull: &[(f64, f64)], p: (f64, f64), tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => (p.0 - hull[0].0).hypot(p.1 - hull[0].1) <= tol,
        2 => dist_to_segment(hull[0], hull[1], p) <= tol,
        _ => {
            let m = hull.len();
            (0..m).all(|i| {
                let a = hull[i];
                let b = hull[(i + 1) % m];
                (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= -tol
            })
        }
    }
}

fn dist_to_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len_sq).clamp(0.0, 1.0)
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::build_example_matrices;
    use nalgebra::DVector;

    fn diag2(x: f64, y: f64) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            2,
            [x, y].iter().map(|&v| Complex64::new(v, 0.0)),
        ))
    }

    #[test]
    fn segment_range() {
        let a = diag2(0.0, 1.0);
        let b = DMatrix::<Complex64>::zeros(2, 2);
        let pts = numerical_range_boundary(&a, &b, 16).unwrap();
        for p in &pts {
            assert!(p.beta.abs() < 1e-12);
            assert!(p.alpha >= -1e-12 && p.alpha <= 1.0 + 1e-12);
        }
        let hull = convex_hull(&pts.iter().map(|p| (p.alpha, p.beta)).collect::<Vec<_>>());
        assert_eq!(hull.len(), 2);
        assert!(hull_contains(&hull, (0.5, 0.0), 1e-12));
        assert!(!hull_contains(&hull, (0.5, 0.1), 1e-12));
    }

    #[test]
    fn example_pair_alpha_stays_in_unit_interval() {
        let (a, b) = build_example_matrices();
        let pts = numerical_range_boundary(&a, &b, 360).unwrap();
        for p in &pts {
            assert!(p.alpha >= -1e-10 && p.alpha <= 1.0 + 1e-10);
            // witness consistency
            let ax = inner(&(&a * &p.witness), &p.witness).re;
            assert!((ax - p.alpha).abs() < 1e-10);
        }
    }

    #[test]
    fn example_pair_y_axis_pinch() {
        let (a, b) = build_example_matrices();
        let pts = numerical_range_boundary(&a, &b, 720).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| (p.alpha, p.beta)).collect();
        let hull = convex_hull(&coords);
        let min_alpha = hull.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        assert!(min_alpha.abs() < 1e-10);
        for p in &hull {
            if p.0 <= 1e-9 {
                assert!(p.1.abs() < 1e-6, "flat leak at {p:?}");
            }
        }
    }

    #[test]
    fn hull_monotone_under_grid_refinement() {
        let (a, b) = build_example_matrices();
        let coarse = numerical_range_boundary(&a, &b, 90).unwrap();
        let fine = numerical_range_boundary(&a, &b, 180).unwrap();
        let hull_coarse = convex_hull(&coarse.iter().map(|p| (p.alpha, p.beta)).collect::<Vec<_>>());
        let hull_fine = convex_hull(&fine.iter().map(|p| (p.alpha, p.beta)).collect::<Vec<_>>());
        for v in &hull_coarse {
            assert!(hull_contains(&hull_fine, *v, 1e-12), "vertex {v:?} escaped");
        }
    }

    #[test]
    fn degenerate_top_eigenspace_is_flagged() {
        let a = diag2(1.0, 1.0);
        let b = DMatrix::<Complex64>::zeros(2, 2);
        let pts = numerical_range_boundary(&a, &b, 8).unwrap();
        assert!(pts.iter().any(|p| p.degenerate));
    }

    #[test]
    fn rejects_tiny_grid_and_non_hermitian() {
        let a = diag2(0.0, 1.0);
        let b = diag2(1.0, 0.0);
        assert!(numerical_range_boundary(&a, &b, 3).is_err());
        let mut c = DMatrix::<Complex64>::zeros(2, 2);
        c[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(numerical_range_boundary(&a, &c, 16).is_err());
    }
}
