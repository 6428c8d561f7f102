//! Two-sided bounds on the Crouzeix ratio from the disk image `M = g(A)`.
//!
//! Lower bounds: for a Blaschke product `b` of order `n - 1`, the sup norm
//! of `b` on the disk is one, so `|b(M)|` is a lower bound on the ratio.
//! Upper bounds: a triangular similarity `H` with `H^{-1} M H = J` (the
//! nilpotent Jordan block) gives `psi <= cond(H)`, because `J` is a
//! contraction on the disk. Both sides start from reference parameter sets
//! and are polished by the deterministic simplex search in [`optim`].

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::matrix::{CMatrix, Complex64};
use crate::optim::{self, Options};
use crate::{Error, Result};

/// First Toeplitz row of `M = g(A_n)` (offsets 1..n-1), as produced by the
/// default-resolution conformal solve. Used as search seeds and test
/// anchors.
pub fn reference_row(n: usize) -> Result<&'static [f64]> {
    match n {
        3 => Ok(&[1.360374515, 0.710915425]),
        4 => Ok(&[1.1888506, 0.3742134, 0.3443362]),
        5 => Ok(&[1.1170233, 0.2325756, 0.2187502, 0.1895824]),
        6 => Ok(&[1.0798634, 0.1590093, 0.1519169, 0.1359021, 0.1161184]),
        _ => Err(Error::BadDimension { n, min: 3 }),
    }
}

/// Default Blaschke roots (order `n - 1`) seeding the lower-bound search.
pub fn default_roots(n: usize) -> Result<Vec<Complex64>> {
    let c = Complex64::new;
    match n {
        3 => Ok(vec![c(-0.5470208, 0.0), c(0.1465739, 0.0)]),
        4 => Ok(vec![
            c(-0.4560323, 0.3891911),
            c(-0.4560323, -0.3891911),
            c(0.2474013, 0.0),
        ]),
        5 => Ok(vec![
            c(-0.2583004, 0.60451151),
            c(-0.2583004, -0.60451151),
            c(-0.6247827, 0.0),
            c(0.3295365, 0.0),
        ]),
        6 => Ok(vec![
            c(-0.5859775, 0.3199164),
            c(-0.5859775, -0.3199164),
            c(-0.0604565, 0.70030221),
            c(-0.0604565, -0.70030221),
            c(0.3972632, 0.0),
        ]),
        _ => Err(Error::BadDimension { n, min: 3 }),
    }
}

/// A sixth real root sometimes quoted alongside the `n = 6` set. An
/// order-6 product with it stays below norm one, so the order-5 set above
/// is the one that certifies the bound; the alternative is reported for
/// comparison only.
pub const EXTRA_ROOT_N6: f64 = 0.3295365;

/// Default free similarity parameters seeding the upper-bound search.
pub fn default_free(n: usize) -> Result<Vec<f64>> {
    match n {
        3 => Ok(Vec::new()),
        4 => Ok(vec![-0.0735033, -0.0231366]),
        5 => Ok(vec![-0.0194597, -0.0384976, -0.1091772, -0.2503045]),
        6 => Ok(vec![-0.0163999, -0.0248879, -0.0578414, -0.1294105, -0.243031]),
        _ => Err(Error::BadDimension { n, min: 3 }),
    }
}

/// Finite Blaschke product with all roots strictly inside the unit disk.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    pub roots: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(roots: Vec<Complex64>) -> Result<Self> {
        for r in &roots {
            if r.norm() >= 1.0 {
                return Err(Error::RootOnCircle { modulus: r.norm() });
            }
        }
        Ok(BlaschkeProduct { roots })
    }
}

/// Scalar evaluation `prod (z - r)/(1 - conj(r) z)`; unimodular on the
/// unit circle.
pub fn blaschke_scalar(z: Complex64, b: &BlaschkeProduct) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for r in &b.roots {
        acc *= (z - r) / (Complex64::new(1.0, 0.0) - r.conj() * z);
    }
    acc
}

/// Apply the product to a strictly upper triangular matrix:
/// `prod (m - r I)(I - conj(r) m)^{-1}`. The factors commute for the
/// Toeplitz nilpotent inputs this is used on; that is asserted to 1e-12.
pub fn blaschke_apply(m: &CMatrix, b: &BlaschkeProduct) -> Result<CMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "square input required");
    for i in 0..n {
        for j in 0..=i {
            if m.at(i, j).norm() != 0.0 {
                return Err(Error::BadInput("matrix must be strictly upper triangular"));
            }
        }
    }
    let eye = CMatrix::identity(n);
    let mut factors = Vec::with_capacity(b.roots.len());
    for r in &b.roots {
        let num = m.sub(&eye.scale(*r));
        let den = eye.sub(&m.scale(r.conj()));
        factors.push(num.mul(&den.inverse()?));
    }
    for w in factors.windows(2) {
        let fwd = w[0].mul(&w[1]);
        let bwd = w[1].mul(&w[0]);
        let drift = fwd.sub(&bwd).max_abs();
        if drift > 1e-12 * (1.0 + fwd.max_abs()) {
            return Err(Error::BadInput("Blaschke factors failed to commute"));
        }
    }
    let mut acc = eye;
    for f in &factors {
        acc = acc.mul(f);
    }
    Ok(acc)
}

/// Radial clamp keeping searched roots strictly inside the disk.
const ROOT_CLAMP: f64 = 1.0 - 1e-6;

fn clamp_roots(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2)
        .map(|p| {
            let r = Complex64::new(p[0], p[1]);
            let m = r.norm();
            if m > ROOT_CLAMP {
                r * (ROOT_CLAMP / m)
            } else {
                r
            }
        })
        .collect()
}

/// Maximize `|b(m)|` over root positions, starting from `init`. The
/// returned norm is never below the starting norm (the simplex keeps its
/// best vertex), and the returned roots are inside the clamp radius.
pub fn lower_bound_search(
    m: &CMatrix,
    init: &BlaschkeProduct,
) -> Result<(BlaschkeProduct, f64)> {
    // Fail fast on bad input before entering the search.
    blaschke_apply(m, init)?;
    let x0: Vec<f64> = init.roots.iter().flat_map(|r| [r.re, r.im]).collect();
    let objective = |x: &[f64]| -> f64 {
        let b = BlaschkeProduct { roots: clamp_roots(x) };
        match blaschke_apply(m, &b).and_then(|bm| bm.spectral_norm()) {
            Ok(v) => -v,
            Err(_) => 1e9,
        }
    };
    let (x, neg) = optim::minimize(objective, &x0, Options::default());
    let best = BlaschkeProduct { roots: clamp_roots(&x) };
    Ok((best, -neg))
}

/// Triangular similarity taking `M` to the Jordan block.
#[derive(Debug, Clone)]
pub struct SimilarityH {
    pub n: usize,
    pub h: CMatrix,
    pub free: Vec<f64>,
}

fn expected_free_len(n: usize) -> Result<usize> {
    match n {
        3 => Ok(0),
        4 => Ok(2),
        5 => Ok(4),
        6 => Ok(5),
        _ => Err(Error::BadDimension { n, min: 3 }),
    }
}

/// Build the similarity from the Toeplitz row of `M` and the free
/// parameters of its last column.
///
/// The last column is pinned down to its free entries by the structure
/// (`1/a`-power tail and, for `n = 3, 4`, closed forms in the row); every
/// other column follows from `col_{j-1} = M col_j`, which makes
/// `H^{-1} M H = J` hold identically: `M H = H J` says exactly that
/// column `j - 1` of `H` is `M` times column `j`, plus `M h_1 = 0`, which
/// the construction delivers because `h_1` lands on the first coordinate
/// axis scaled by `a^{(n-1)/2}`.
pub fn build_h(n: usize, row: &[f64], free: &[f64]) -> Result<SimilarityH> {
    let expected = expected_free_len(n)?;
    if free.len() != expected {
        return Err(Error::BadFreeLength { expected, got: free.len() });
    }
    if row.len() < n - 1 {
        return Err(Error::BadInput("Toeplitz row shorter than n - 1"));
    }
    let a = row[0];
    if !(a > 0.0) {
        return Err(Error::BadInput("leading Toeplitz entry must be positive"));
    }
    let b = row[1];

    let last: Vec<f64> = match n {
        3 => vec![-b * b / (8.0 * a.powi(3)), -b / (2.0 * a * a), 1.0 / a],
        4 => vec![free[1], free[0], -b / a.powf(2.5), a.powf(-1.5)],
        5 => vec![free[0], free[1], free[2], free[3], a.powi(-2)],
        6 => vec![free[0], free[1], free[2], free[3], free[4], a.powf(-2.5)],
        _ => unreachable!(),
    };

    let matvec = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| ((i + 1)..n).map(|j| row[j - i - 1] * x[j]).sum())
            .collect()
    };
    let mut cols = vec![last];
    for _ in 1..n {
        let next = matvec(cols.last().expect("nonempty"));
        cols.push(next);
    }
    cols.reverse();

    let h = CMatrix::from_fn(n, n, |i, j| Complex64::new(cols[j][i], 0.0))?;
    // The recurrence must land each diagonal entry on a^{(n-1)/2 - j}.
    #[cfg(debug_assertions)]
    for j in 0..n {
        let want = a.powf((n as f64 - 1.0) / 2.0 - j as f64);
        debug_assert!((h.at(j, j).re - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
    Ok(SimilarityH { n, h, free: free.to_vec() })
}

/// Residual of the Jordan identity and the norm of the conjugated matrix:
/// `(max |H^{-1} M H - J|, |H^{-1} M H|)`.
pub fn verify_jordan(h: &SimilarityH, m: &CMatrix) -> Result<(f64, f64)> {
    let hinv = h.h.inverse()?;
    let t = hinv.mul(m).mul(&h.h);
    let j = CMatrix::upper_toeplitz(h.n, &[Complex64::new(1.0, 0.0)]);
    let residual = t.sub(&j).max_abs();
    let contraction = t.spectral_norm()?;
    Ok((residual, contraction))
}

/// Residual ceiling the upper-bound search enforces on candidates.
const JORDAN_GUARD: f64 = 1e-8;

/// Minimize `cond(H)` over the free parameters; the row is read off the
/// first row of `M`. The structural construction keeps the Jordan
/// residual at rounding level, so the guard only rejects numerically
/// broken candidates.
pub fn upper_bound_search(m: &CMatrix, init_free: &[f64]) -> Result<(SimilarityH, f64)> {
    let n = m.rows();
    let row: Vec<f64> = (1..n).map(|j| m.at(0, j).re).collect();
    // Fail fast before the search loop.
    let h0 = build_h(n, &row, init_free)?;
    verify_jordan(&h0, m)?;

    let objective = |free: &[f64]| -> f64 {
        let Ok(h) = build_h(n, &row, free) else {
            return 1e9;
        };
        match verify_jordan(&h, m) {
            Ok((resid, _)) if resid <= JORDAN_GUARD => h.h.cond2().unwrap_or(1e9),
            _ => 1e9,
        }
    };
    let (free, cond) = optim::minimize(objective, init_free, Options::default());
    let h = build_h(n, &row, &free)?;
    Ok((h, cond))
}

/// Certified two-sided bracket for one KMS order.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: usize,
    pub lower: f64,
    pub lower_roots: Vec<Complex64>,
    pub upper: f64,
    pub free_params: Vec<f64>,
    pub jordan_residual: f64,
    pub contraction_norm: f64,
    /// Evaluation with the order-6 root set appended for `n = 6`.
    pub alt_lower: Option<f64>,
    pub bracket_valid: bool,
}

/// Run both searches against the Toeplitz image `m` of the KMS matrix.
pub fn bracket(m: &CMatrix) -> Result<BoundReport> {
    let n = m.rows();
    let init = BlaschkeProduct::new(default_roots(n)?)?;
    let (b_best, lower) = lower_bound_search(m, &init)?;
    let (h_best, upper) = upper_bound_search(m, &default_free(n)?)?;
    let (jordan_residual, contraction_norm) = verify_jordan(&h_best, m)?;

    let alt_lower = if n == 6 {
        let mut roots = default_roots(6)?;
        roots.push(Complex64::new(EXTRA_ROOT_N6, 0.0));
        let alt = BlaschkeProduct::new(roots)?;
        Some(blaschke_apply(m, &alt)?.spectral_norm()?)
    } else {
        None
    };

    let bracket_valid =
        lower <= upper + 1e-9 && contraction_norm <= 1.0 + 1e-9 && jordan_residual <= JORDAN_GUARD;
    Ok(BoundReport {
        n,
        lower,
        lower_roots: b_best.roots,
        upper,
        free_params: h_best.free,
        jordan_residual,
        contraction_norm,
        alt_lower,
        bracket_valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_m(n: usize) -> CMatrix {
        let row: Vec<Complex64> =
            reference_row(n).unwrap().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        CMatrix::upper_toeplitz(n, &row)
    }

    /// Searched bracket endpoints for the four orders, to printed accuracy.
    const EXPECTED: [(usize, f64); 4] = [
        (3, 1.995697855),
        (4, 1.993800224),
        (5, 1.992921572),
        (6, 1.992444501),
    ];

    #[test]
    fn root_on_circle_is_rejected() {
        let r = BlaschkeProduct::new(vec![Complex64::new(0.8, 0.6)]);
        assert!(matches!(r, Err(Error::RootOnCircle { .. })));
        assert!(BlaschkeProduct::new(vec![Complex64::new(0.99, 0.0)]).is_ok());
    }

    #[test]
    fn scalar_product_is_unimodular_on_circle() {
        let b = BlaschkeProduct::new(vec![
            Complex64::new(0.3, -0.4),
            Complex64::new(-0.1, 0.55),
        ])
        .unwrap();
        for j in 0..64 {
            let t = core::f64::consts::TAU * j as f64 / 64.0;
            let z = Complex64::new(t.cos(), t.sin());
            assert!((blaschke_scalar(z, &b).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_evaluates_to_root_product() {
        let b = BlaschkeProduct::new(vec![Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.0)])
            .unwrap();
        let m = CMatrix::zeros(3, 3);
        let norm = blaschke_apply(&m, &b).unwrap().spectral_norm().unwrap();
        assert!((norm - 0.06).abs() < 1e-12);
    }

    #[test]
    fn non_triangular_input_is_rejected() {
        let m = CMatrix::from_fn(2, 2, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let b = BlaschkeProduct::new(vec![Complex64::new(0.1, 0.0)]).unwrap();
        assert!(matches!(blaschke_apply(&m, &b), Err(Error::BadInput(_))));
    }

    #[test]
    fn norm_is_invariant_under_unimodular_scaling() {
        // D M D^{-1} with unimodular diagonal D keeps |b(M)| fixed.
        let m = reference_m(4);
        let b = BlaschkeProduct::new(default_roots(4).unwrap()).unwrap();
        let base = blaschke_apply(&m, &b).unwrap().spectral_norm().unwrap();
        let phases = [0.0f64, 0.7, 1.9, -1.1];
        let d = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(phases[i].cos(), phases[i].sin())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let m2 = d.mul(&m).mul(&d.inverse().unwrap());
        // Rotated matrix is still strictly upper triangular.
        let rotated = blaschke_apply(&m2, &b).unwrap().spectral_norm().unwrap();
        assert!((base - rotated).abs() < 1e-10);
    }

    #[test]
    fn default_root_sets_reach_reference_norms() {
        for (n, want) in EXPECTED {
            let m = reference_m(n);
            let b = BlaschkeProduct::new(default_roots(n).unwrap()).unwrap();
            let norm = blaschke_apply(&m, &b).unwrap().spectral_norm().unwrap();
            assert!((norm - want).abs() < 1e-6, "n = {n}: norm = {norm}");
        }
    }

    #[test]
    fn order_six_root_set_underperforms() {
        let m = reference_m(6);
        let mut roots = default_roots(6).unwrap();
        roots.push(Complex64::new(EXTRA_ROOT_N6, 0.0));
        let b = BlaschkeProduct::new(roots).unwrap();
        let norm = blaschke_apply(&m, &b).unwrap().spectral_norm().unwrap();
        assert!((norm - 0.960195529).abs() < 1e-6, "norm = {norm}");
        assert!(norm < 1.0);
    }

    #[test]
    fn similarity_reaches_reference_conditions() {
        for (n, want) in EXPECTED {
            let m = reference_m(n);
            let row = reference_row(n).unwrap();
            let h = build_h(n, row, &default_free(n).unwrap()).unwrap();
            let (resid, contraction) = verify_jordan(&h, &m).unwrap();
            assert!(resid < 1e-12, "n = {n}: residual = {resid}");
            assert!(contraction <= 1.0 + 1e-9, "n = {n}: contraction = {contraction}");
            assert!((contraction - 1.0).abs() < 1e-9);
            let cond = h.h.cond2().unwrap();
            assert!((cond - want).abs() < 1e-6, "n = {n}: cond = {cond}");
        }
    }

    #[test]
    fn similarity_diagonal_is_half_integer_powers() {
        let row = reference_row(5).unwrap();
        let h = build_h(5, row, &default_free(5).unwrap()).unwrap();
        let a = row[0];
        for j in 0..5 {
            let want = a.powf(2.0 - j as f64);
            assert!((h.h.at(j, j).re - want).abs() < 1e-12);
        }
        for i in 1..5 {
            for j in 0..i {
                assert_eq!(h.h.at(i, j).norm(), 0.0);
            }
        }
    }

    #[test]
    fn identity_similarity_for_plain_jordan_row() {
        let h = build_h(3, &[1.0, 0.0], &[]).unwrap();
        assert!(h.h.sub(&CMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn wrong_free_length_is_rejected() {
        let row = reference_row(4).unwrap();
        assert!(matches!(
            build_h(4, row, &[0.0]),
            Err(Error::BadFreeLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            build_h(7, &[1.0; 6], &[]),
            Err(Error::BadDimension { .. })
        ));
    }

    #[test]
    fn searches_do_not_regress_from_seeds() {
        let m = reference_m(4);
        let init = BlaschkeProduct::new(default_roots(4).unwrap()).unwrap();
        let init_norm = blaschke_apply(&m, &init).unwrap().spectral_norm().unwrap();
        let (best, lower) = lower_bound_search(&m, &init).unwrap();
        assert!(lower >= init_norm - 1e-12);
        for r in &best.roots {
            assert!(r.norm() <= ROOT_CLAMP + 1e-12);
        }

        let free = default_free(4).unwrap();
        let h0 = build_h(4, reference_row(4).unwrap(), &free).unwrap();
        let init_cond = h0.h.cond2().unwrap();
        let (_, upper) = upper_bound_search(&m, &free).unwrap();
        assert!(upper <= init_cond + 1e-12);
    }

    #[test]
    fn zero_matrix_search_drives_roots_outward() {
        let m = CMatrix::zeros(3, 3);
        let init = BlaschkeProduct::new(vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(-0.2, 0.1),
        ])
        .unwrap();
        let (best, norm) = lower_bound_search(&m, &init).unwrap();
        assert!(norm >= 0.3 * (0.2f64.hypot(0.1)) - 1e-12);
        assert!(norm <= 1.0 + 1e-12);
        // At the optimum every root presses against the clamp.
        for r in &best.roots {
            assert!(r.norm() > 0.9, "root {r} did not move outward");
        }
    }

    #[test]
    fn bracket_for_order_three() {
        let report = bracket(&reference_m(3)).unwrap();
        assert!(report.bracket_valid);
        assert!(report.lower <= report.upper + 1e-9);
        assert!(report.upper - report.lower < 1e-5);
        assert!((report.upper - 1.995697855).abs() < 1e-6);
        assert!(report.alt_lower.is_none());
        assert!(report.jordan_residual < 1e-10);
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn disk_root() -> impl Strategy<Value = Complex64> {
            (-0.85..0.85f64, -0.85..0.85f64).prop_filter_map("inside disk", |(re, im)| {
                let z = Complex64::new(re, im);
                (z.norm() < 0.9).then_some(z)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn scalar_blaschke_stays_unimodular(
                roots in proptest::collection::vec(disk_root(), 1..4),
                t in 0.0..core::f64::consts::TAU,
            ) {
                let b = BlaschkeProduct::new(roots).unwrap();
                let z = Complex64::new(t.cos(), t.sin());
                prop_assert!((blaschke_scalar(z, &b).norm() - 1.0).abs() < 1e-12);
            }

            #[test]
            fn nilpotent_image_norm_is_positive_and_finite(
                roots in proptest::collection::vec(disk_root(), 2..4),
                a in 0.5..1.5f64,
                bb in -0.5..0.5f64,
            ) {
                let m = CMatrix::upper_toeplitz(
                    3,
                    &[Complex64::new(a, 0.0), Complex64::new(bb, 0.0)],
                );
                let b = BlaschkeProduct::new(roots).unwrap();
                let norm = blaschke_apply(&m, &b).unwrap().spectral_norm().unwrap();
                prop_assert!(norm.is_finite() && norm > 0.0);
            }
        }
    }
}
