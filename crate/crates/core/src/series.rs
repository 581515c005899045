//! Kernel coefficient sequences and their power-series arithmetic.
//!
//! A space is described by strictly positive coefficients `a_n` with
//! `a_0 = 1`; the squared norm of `Σ f̂(n) zⁿ` is `Σ |f̂(n)|²/a_n` and the
//! kernel is `K(z,w) = Σ a_n (z·w̄)ⁿ`. Inverting the generating series
//! gives the coefficients `b_n` of `1 - 1/Σ a_n zⁿ`; their positivity is
//! the complete Pick property, checked here up to the truncation depth.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// How the coefficients are generated.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    /// Power-law scale `a_n = (n+1)^s`.
    HsScale(f64),
    /// User-supplied positive coefficients, `a_0 = 1`.
    Explicit(Vec<f64>),
}

/// A space specification: generation rule plus truncation depth `N ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub depth: usize,
}

impl SpaceSpec {
    pub fn hs(s: f64, depth: usize) -> Self {
        assert!(depth >= 1, "depth must be at least 1");
        SpaceSpec {
            kind: SpaceKind::HsScale(s),
            depth,
        }
    }

    /// Depth is taken from the list length.
    pub fn explicit(values: Vec<f64>) -> Self {
        assert!(values.len() >= 2, "explicit list needs at least a_0, a_1");
        let depth = values.len() - 1;
        SpaceSpec {
            kind: SpaceKind::Explicit(values),
            depth,
        }
    }
}

/// Which series a [`CoefficientSequence`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Kernel coefficients `a_n`, `n = 0..=N`.
    KernelA,
    /// Pick coefficients `b_n`, `n = 1..=N` (entry 0 is unused and zero).
    PickB,
}

/// A truncated coefficient sequence with optional certified tail bound
/// on `Σ_{n>N} |c_n|`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSequence {
    values: Vec<f64>,
    role: Role,
    tail_bound: Option<f64>,
}

impl CoefficientSequence {
    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    /// Attach a user-supplied tail certificate (explicit sequences only
    /// get tails this way).
    pub fn with_tail_bound(mut self, bound: f64) -> Self {
        assert!(bound >= 0.0, "tail bound must be nonnegative");
        self.tail_bound = Some(bound);
        self
    }

    /// Cumulative sums `S_g = Σ_{n ≤ g} c_n`.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect()
    }

    /// Certified bound on `Σ_{n > g} c_n` for `g ≤ N`, if a tail bound
    /// at depth N is present.
    pub fn tail_beyond(&self, g: usize) -> Option<f64> {
        let t = self.tail_bound?;
        assert!(g <= self.depth());
        let inside: f64 = self.values[g + 1..].iter().sum();
        Some(inside + t)
    }
}

/// Positivity report for the inverted coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PickReport {
    pub is_pick_up_to_depth: bool,
    pub min_b: f64,
    pub first_negative_index: Option<usize>,
}

/// Regularity and boundedness diagnostics for a kernel sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    /// `a_n / a_{n+1}` for `n = 0..N-1`.
    pub ratios: Vec<f64>,
    /// `|a_{N-1}/a_N - 1|`.
    pub tail_deviation: f64,
    /// `Σ_{n ≤ N} a_n`.
    pub partial_sum: f64,
    pub tail_bound: Option<f64>,
    /// Whether a certified tail (hence a bounded kernel) is available.
    pub kernel_bounded: bool,
}

fn power_law(n: usize, s: f64) -> f64 {
    let base = (n + 1) as f64;
    if s == s.trunc() && s.abs() <= 64.0 {
        base.powi(s as i32)
    } else {
        base.powf(s)
    }
}

/// Generate the kernel coefficients `a_n`, `n = 0..=N`.
///
/// For the power-law scale with `s < -1` the tail is certified by
/// integral comparison: `Σ_{n>N} (n+1)^s ≤ (N+1)^{s+1} / (-s-1)`.
pub fn coeffs_a(spec: &SpaceSpec) -> Result<CoefficientSequence> {
    let n = spec.depth;
    let values: Vec<f64> = match &spec.kind {
        SpaceKind::HsScale(s) => (0..=n).map(|k| power_law(k, *s)).collect(),
        SpaceKind::Explicit(list) => {
            if list.len() != n + 1 {
                return Err(Error::InvalidSpec(format!(
                    "explicit list has {} entries but depth {} needs {}",
                    list.len(),
                    n,
                    n + 1
                )));
            }
            list.clone()
        }
    };
    if values[0] != 1.0 {
        return Err(Error::NonUnitLeading(values[0]));
    }
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { index, value });
        }
    }
    let tail_bound = match &spec.kind {
        SpaceKind::HsScale(s) if *s < -1.0 => {
            Some(((n + 1) as f64).powf(s + 1.0) / (-s - 1.0))
        }
        _ => None,
    };
    Ok(CoefficientSequence {
        values,
        role: Role::KernelA,
        tail_bound,
    })
}

/// Invert the kernel series to the Pick coefficients: with `c_0 = 1` and
/// `c_n = -Σ_{k=1}^{n} a_k c_{n-k}`, set `b_n = -c_n`.
pub fn invert_to_b(a: &CoefficientSequence) -> CoefficientSequence {
    assert_eq!(a.role(), Role::KernelA, "inversion expects kernel coefficients");
    let n = a.depth();
    let mut c = vec![0.0f64; n + 1];
    c[0] = 1.0;
    for m in 1..=n {
        let mut sum = 0.0;
        for k in 1..=m {
            sum += a.value(k) * c[m - k];
        }
        c[m] = -sum;
    }
    let mut values: Vec<f64> = c.iter().map(|&x| -x).collect();
    values[0] = 0.0;
    CoefficientSequence {
        values,
        role: Role::PickB,
        tail_bound: None,
    }
}

/// Report the minimum of `b_1..b_N` and the first index below `-tol::PICK`.
pub fn pick_check(a: &CoefficientSequence) -> PickReport {
    let b = invert_to_b(a);
    let mut min_b = f64::INFINITY;
    let mut first_negative_index = None;
    for n in 1..=b.depth() {
        let v = b.value(n);
        if v < min_b {
            min_b = v;
        }
        if first_negative_index.is_none() && v < -tol::PICK {
            first_negative_index = Some(n);
        }
    }
    PickReport {
        is_pick_up_to_depth: min_b >= -tol::PICK,
        min_b,
        first_negative_index,
    }
}

/// Partial kernel sum `Σ_{n ≤ N} a_n (z·w̄)ⁿ` with a certified remainder
/// bound.
///
/// On the boundary (`|z||w| = 1`) a tail bound must be present. Strictly
/// inside, a missing tail bound is replaced by a geometric comparison
/// using the largest coefficient ratio over the trailing half of the
/// window; this certifies power-law-type sequences whose ratios are
/// eventually monotone.
pub fn kernel_value(
    a: &CoefficientSequence,
    z: Complex64,
    w: Complex64,
) -> Result<(Complex64, f64)> {
    assert_eq!(a.role(), Role::KernelA);
    let boundary_eps = 1e-12;
    assert!(
        z.norm() <= 1.0 + boundary_eps && w.norm() <= 1.0 + boundary_eps,
        "kernel arguments must lie in the closed unit disc"
    );
    let x = z * w.conj();
    let r = x.norm();
    let n = a.depth();

    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        sum += Complex64::new(a.value(k), 0.0) * pow;
        pow *= x;
    }

    let bound = if let Some(t) = a.tail_bound() {
        t * r.powi(n as i32 + 1).min(1.0)
    } else if r < 1.0 - boundary_eps {
        // geometric comparison: a_m ≤ a_N · ρ^{m-N} for m > N with ρ the
        // largest ratio over the trailing half of the window
        let mut rho: f64 = 0.0;
        for k in (n / 2).max(1)..n {
            rho = rho.max(a.value(k + 1) / a.value(k));
        }
        if rho == 0.0 {
            rho = 1.0;
        }
        let q = rho * r;
        if q >= 1.0 {
            return Err(Error::UnboundedAtBoundary);
        }
        a.value(n) * r.powi(n as i32) * q / (1.0 - q)
    } else {
        return Err(Error::UnboundedAtBoundary);
    };
    Ok((sum, bound))
}

/// Ratio sequence, tail deviation from 1, partial sum, and boundedness
/// flag for a kernel sequence.
pub fn regularity_report(a: &CoefficientSequence) -> RegularityReport {
    assert_eq!(a.role(), Role::KernelA);
    let n = a.depth();
    let ratios: Vec<f64> = (0..n).map(|k| a.value(k) / a.value(k + 1)).collect();
    let tail_deviation = (ratios.last().copied().unwrap_or(1.0) - 1.0).abs();
    RegularityReport {
        ratios,
        tail_deviation,
        partial_sum: a.values().iter().sum(),
        tail_bound: a.tail_bound(),
        kernel_bounded: a.tail_bound().is_some(),
    }
}

/// Residuals `|(1 - Σ_{n ≤ N'} b_n) - 1/K_{N'}(1,1)|` for each requested
/// truncation `N'`. Requires a bounded kernel.
pub fn b_sum_identity_residuals(
    a: &CoefficientSequence,
    depths: &[usize],
) -> Result<Vec<f64>> {
    assert_eq!(a.role(), Role::KernelA);
    if a.tail_bound().is_none() {
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
    let sums_a = a.partial_sums();
    let sums_b = b.partial_sums();
    Ok(depths
        .iter()
        .map(|&d| ((1.0 - sums_b[d]) - 1.0 / sums_a[d]).abs())
        .collect())
}

/// Exact rational arithmetic for the inversion, used as the anti-drift
/// oracle for the floating-point recursion.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    use super::{SpaceKind, SpaceSpec};

    /// Exact coefficients when the rule produces rationals: power-law
    /// scales with integer exponent, or explicit f64 lists (every f64 is
    /// a dyadic rational).
    pub fn rational_coeffs(spec: &SpaceSpec) -> Option<Vec<BigRational>> {
        match &spec.kind {
            SpaceKind::HsScale(s) => {
                if *s != s.trunc() || s.abs() > 64.0 {
                    return None;
                }
                let e = *s as i64;
                Some(
                    (0..=spec.depth)
                        .map(|n| {
                            let base = BigInt::from(n as u64 + 1);
                            let p = base.pow(e.unsigned_abs() as u32);
                            if e >= 0 {
                                BigRational::from_integer(p)
                            } else {
                                BigRational::new(BigInt::one(), p)
                            }
                        })
                        .collect(),
                )
            }
            SpaceKind::Explicit(list) => list
                .iter()
                .map(|&v| BigRational::from_float(v))
                .collect::<Option<Vec<_>>>(),
        }
    }

    /// The inversion recursion in exact arithmetic; `b[0]` is zero.
    pub fn invert_to_b_exact(a: &[BigRational]) -> Vec<BigRational> {
        let n = a.len() - 1;
        let mut c = vec![BigRational::zero(); n + 1];
        c[0] = BigRational::one();
        for m in 1..=n {
            let mut sum = BigRational::zero();
            for k in 1..=m {
                sum += &a[k] * &c[m - k];
            }
            c[m] = -sum;
        }
        let mut b: Vec<BigRational> = c.iter().map(|x| -x.clone()).collect();
        b[0] = BigRational::zero();
        b
    }

    /// Largest absolute deviation of the coefficients of `A(z)·(1-B(z))`
    /// from the constant series 1, through the shared degree. Zero iff
    /// the reciprocal identity holds exactly.
    pub fn reciprocal_residual_exact(a: &[BigRational], b: &[BigRational]) -> BigRational {
        let n = a.len() - 1;
        let mut worst = BigRational::zero();
        for k in 0..=n {
            // coefficient k of A(z) - A(z)·B(z)
            let mut c = a[k].clone();
            for j in 1..=k {
                c -= &b[j] * &a[k - j];
            }
            let target = if k == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let dev = (c - target).abs();
            if dev > worst {
                worst = dev;
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    /// Brute-force oracle: max deviation of the coefficients of
    /// `A(z)·(1-B(z))` from 1 through degree N.
    fn reciprocal_residual(a: &CoefficientSequence, b: &CoefficientSequence) -> f64 {
        let n = a.depth();
        (0..=n)
            .map(|k| {
                let mut c = a.value(k);
                for j in 1..=k.min(b.depth()) {
                    c -= b.value(j) * a.value(k - j);
                }
                (c - if k == 0 { 1.0 } else { 0.0 }).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn coeffs_flat_scale() {
        let a = coeffs_a(&SpaceSpec::hs(0.0, 5)).unwrap();
        assert_eq!(a.values(), &[1.0; 6]);
        assert!(a.tail_bound().is_none());
    }

    #[test]
    fn coeffs_inverse_square_scale() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 3)).unwrap();
        assert_eq!(a.values(), &[1.0, 0.25, 1.0 / 9.0, 0.0625]);
        // integral comparison gives 1/(N+1) here
        let tb = a.tail_bound().unwrap();
        assert!((tb - 0.25).abs() < 1e-15);
        // soundness: the bound dominates the true tail zeta(2) - S_N
        let true_tail = std::f64::consts::PI.powi(2) / 6.0 - a.values().iter().sum::<f64>();
        assert!(true_tail <= tb);
    }

    #[test]
    fn coeffs_explicit_passthrough() {
        let a = coeffs_a(&SpaceSpec::explicit(vec![1.0, 0.5, 1.0 / 3.0])).unwrap();
        assert_eq!(a.values(), &[1.0, 0.5, 1.0 / 3.0]);
    }

    #[test]
    fn coeffs_rejects_bad_leading_and_nonpositive() {
        assert!(matches!(
            coeffs_a(&SpaceSpec::explicit(vec![2.0, 1.0])),
            Err(Error::NonUnitLeading(_))
        ));
        assert!(matches!(
            coeffs_a(&SpaceSpec::explicit(vec![1.0, 0.0])),
            Err(Error::NonPositive { index: 1, .. })
        ));
        assert!(matches!(
            coeffs_a(&SpaceSpec::explicit(vec![1.0, -0.5])),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn invert_hardy_is_single_shift() {
        let a = coeffs_a(&SpaceSpec::hs(0.0, 8)).unwrap();
        let b = invert_to_b(&a);
        assert_eq!(b.value(1), 1.0);
        for n in 2..=8 {
            assert_eq!(b.value(n), 0.0);
        }
        assert_eq!(reciprocal_residual(&a, &b), 0.0);
    }

    #[test]
    fn invert_dirichlet_prefix() {
        // hand-run: c_1 = -1/2, so b_1 = 1/2
        let a = coeffs_a(&SpaceSpec::explicit(vec![1.0, 0.5, 1.0 / 3.0, 0.25])).unwrap();
        let b = invert_to_b(&a);
        assert!((b.value(1) - 0.5).abs() < 1e-15);
        assert!(reciprocal_residual(&a, &b) < 1e-15);
    }

    #[test]
    fn invert_inverse_square_leading() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 2)).unwrap();
        let b = invert_to_b(&a);
        assert!((b.value(1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pick_check_examples() {
        let flat = coeffs_a(&SpaceSpec::hs(0.0, 50)).unwrap();
        let report = pick_check(&flat);
        assert!(report.is_pick_up_to_depth);
        assert_eq!(report.min_b, 0.0);

        let hs2 = coeffs_a(&SpaceSpec::hs(-2.0, 200)).unwrap();
        assert!(pick_check(&hs2).is_pick_up_to_depth);

        // hand-run: c_1 = -2, c_2 = -(a_1 c_1 + a_2 c_0) = 3, so b_2 = -3
        let bad = coeffs_a(&SpaceSpec::explicit(vec![1.0, 2.0, 1.0])).unwrap();
        let report = pick_check(&bad);
        assert!(!report.is_pick_up_to_depth);
        assert_eq!(report.first_negative_index, Some(2));
        assert!((report.min_b + 3.0).abs() < 1e-15);
    }

    #[test]
    fn pick_positive_for_nonpositive_scales() {
        for s in [0.0, -0.5, -1.0, -1.5, -2.0] {
            let a = coeffs_a(&SpaceSpec::hs(s, 500)).unwrap();
            let b = invert_to_b(&a);
            let min = (1..=500).map(|n| b.value(n)).fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-12, "s = {s}: min b = {min}");
        }
    }

    #[test]
    fn kernel_value_at_origin_and_interior() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 50)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let (v, _) = kernel_value(&a, one, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, one);

        let flat = coeffs_a(&SpaceSpec::hs(0.0, 200)).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let (v, bound) = kernel_value(&flat, half, half).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() <= bound + 1e-15);
        assert!((v.re - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_value_boundary_zeta_oracle() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 1000)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let (v, bound) = kernel_value(&a, one, one).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((v.re - zeta2).abs() <= bound, "deviation exceeds certificate");
        assert!(bound < 1.1e-3);
    }

    #[test]
    fn kernel_value_boundary_requires_tail() {
        let flat = coeffs_a(&SpaceSpec::hs(0.0, 50)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(
            kernel_value(&flat, one, one),
            Err(Error::UnboundedAtBoundary)
        ));
    }

    #[test]
    fn kernel_hermitian_symmetry() {
        let a = coeffs_a(&SpaceSpec::hs(-1.5, 300)).unwrap();
        let pts = [
            (Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.7)),
            (Complex64::new(0.9, 0.1), Complex64::new(0.5, -0.5)),
            (Complex64::new(-0.6, 0.0), Complex64::new(0.0, 0.8)),
        ];
        for (z, w) in pts {
            let (kzw, _) = kernel_value(&a, z, w).unwrap();
            let (kwz, _) = kernel_value(&a, w, z).unwrap();
            assert!((kzw - kwz.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn regularity_inverse_square() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 400)).unwrap();
        let report = regularity_report(&a);
        for (n, &r) in report.ratios.iter().enumerate().take(10) {
            let expected = ((n + 2) as f64 / (n + 1) as f64).powi(2);
            assert!((r - expected).abs() < 1e-12);
        }
        assert!(report.kernel_bounded);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((report.partial_sum - zeta2).abs() < 3e-3);
    }

    #[test]
    fn regularity_flat_and_growing() {
        let flat = regularity_report(&coeffs_a(&SpaceSpec::hs(0.0, 100)).unwrap());
        assert!(flat.ratios.iter().all(|&r| r == 1.0));
        assert_eq!(flat.partial_sum, 101.0);
        assert!(!flat.kernel_bounded);

        let growing = regularity_report(&coeffs_a(&SpaceSpec::hs(1.0, 100)).unwrap());
        assert!(!growing.kernel_bounded);
        assert!(growing.tail_deviation < 0.02);
    }

    #[test]
    fn b_sum_identity_decays() {
        let a = coeffs_a(&SpaceSpec::hs(-2.0, 2000)).unwrap();
        let res = b_sum_identity_residuals(&a, &[250, 500, 1000, 2000]).unwrap();
        assert!(res.windows(2).all(|w| w[1] < w[0]), "not decreasing: {res:?}");
        assert!(res[3] < 1e-3);
    }

    #[test]
    fn b_sum_identity_requires_bounded_kernel() {
        let flat = coeffs_a(&SpaceSpec::hs(0.0, 100)).unwrap();
        assert!(matches!(
            b_sum_identity_residuals(&flat, &[50]),
            Err(Error::UnboundedAtBoundary)
        ));
    }

    #[test]
    fn exact_inversion_matches_f64_and_is_exact() {
        let spec = SpaceSpec::hs(-2.0, 50);
        let a_exact = exact::rational_coeffs(&spec).unwrap();
        let b_exact = exact::invert_to_b_exact(&a_exact);
        assert!(exact::reciprocal_residual_exact(&a_exact, &b_exact).is_zero());

        let a = coeffs_a(&spec).unwrap();
        let b = invert_to_b(&a);
        use num_traits::ToPrimitive;
        for n in 1..=50 {
            let exact_f = b_exact[n].to_f64().unwrap();
            assert!((b.value(n) - exact_f).abs() < 1e-14);
        }
    }

    #[test]
    fn rational_coeffs_only_for_integer_exponents() {
        assert!(exact::rational_coeffs(&SpaceSpec::hs(-1.5, 10)).is_none());
        assert!(exact::rational_coeffs(&SpaceSpec::hs(-1.0, 10)).is_some());
        assert!(exact::rational_coeffs(&SpaceSpec::explicit(vec![1.0, 0.5, 0.25])).is_some());
    }

    proptest! {
        /// Reciprocal oracle on random positive sequences. The residual
        /// is measured relative to the output scale: inversion of an
        /// arbitrary positive series can grow geometrically.
        #[test]
        fn reciprocal_identity_randomized(values in proptest::collection::vec(0.05f64..2.0, 1..40)) {
            let mut list = vec![1.0];
            list.extend(values);
            let a = coeffs_a(&SpaceSpec::explicit(list)).unwrap();
            let b = invert_to_b(&a);
            let scale = 1.0 + b.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
            prop_assert!(reciprocal_residual(&a, &b) < 1e-12 * scale * b.depth() as f64);
        }

        /// On the power-law family the identity holds to 1e-12 absolutely.
        #[test]
        fn reciprocal_identity_power_law(s in -2.5f64..0.0, depth in 10usize..200) {
            let a = coeffs_a(&SpaceSpec::hs(s, depth)).unwrap();
            let b = invert_to_b(&a);
            prop_assert!(reciprocal_residual(&a, &b) < 1e-12);
        }
    }
}
