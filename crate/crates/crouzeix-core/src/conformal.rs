//! Conformal map of the numerical range onto the unit disk.
//!
//! The map `g` with `g(0) = 0`, `g'(0) > 0` is recovered from the boundary
//! density `q` of a logarithmic-potential collocation system on the
//! discretized boundary: once `q` is known, the harmonic function
//! `u(z) = sum_j q_j log|sigma_j - z|` extends `log|g|/|z|`-type data into
//! the interior, and the derivatives of `g` at 0 follow from the Cauchy
//! sums `sum_j q_j / sigma_j^k`. The collocation matrix pairs
//! log-distances against the log-distances of equispaced points on the unit
//! circle, with spectral differentiation supplying the boundary derivative
//! on the diagonal. Accuracy is O(nn^-4) in the node count for these
//! piecewise-analytic boundaries.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kms::{build_kms, discretize_boundary};
use crate::matrix::{CMatrix, Complex64, LuFactors, RSystem};
use crate::{Error, Result};

/// Boundary density solve output.
///
/// `q` absorbs the quadrature weight: sums over nodes need no extra factor.
/// `translated` records that the conductor-potential rank defect forced the
/// shifted system `(M - E) q = -(b0 - e)`.
#[derive(Debug, Clone)]
pub struct DensitySolution {
    pub nodes: Vec<Complex64>,
    pub q: Vec<f64>,
    pub sigma_prime_abs: Vec<f64>,
    pub translated: bool,
    pub cond_estimate: f64,
}

/// Taylor data of the map at the origin.
///
/// `u` holds `(u(0), u'(0), .., u''''(0))` of the log-modulus potential;
/// `g` holds `(g'(0), .., g^(5)(0))`; `m` is the image of the KMS matrix
/// under the degree-5 Taylor polynomial of `g` (exact, since the matrix is
/// nilpotent of order at most 6). `m` is strictly upper triangular
/// Toeplitz and `g[0] > 0`.
#[derive(Debug, Clone)]
pub struct ConformalData {
    pub u: [f64; 5],
    pub g: [f64; 5],
    pub m: CMatrix,
}

/// Magnitude of the spectral tangential derivative at every node.
///
/// Odd-length trigonometric differentiation: with
/// `d(m) = (2/nn) sum_{j=1}^{(nn-1)/2} j sin(2 pi j m/nn)`, the derivative
/// at node `i` is `sum_p nodes_p d((p - i) mod nn)`.
pub fn spectral_derivative_abs(nodes: &[Complex64]) -> Result<Vec<f64>> {
    let nn = nodes.len();
    if nn < 3 || nn % 2 == 0 {
        return Err(Error::BadInput("node count must be odd and at least 3"));
    }
    let nh = (nn - 1) / 2;
    let mut d = vec![0.0f64; nn];
    for (m, dm) in d.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in 1..=nh {
            acc += j as f64 * (2.0 * PI * (j * m) as f64 / nn as f64).sin();
        }
        *dm = 2.0 * acc / nn as f64;
    }
    let mut out = vec![0.0f64; nn];
    for i in 0..nn {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, z) in nodes.iter().enumerate() {
            acc += z * d[(p + nn - i) % nn];
        }
        out[i] = acc.norm();
    }
    Ok(out)
}

/// Assemble the collocation system for the given boundary nodes. The
/// right-hand side is left at zero; [`solve_density`] fills it.
///
/// Entries: off the diagonal
/// `log|sigma_k - sigma_j| - log(2 sin(pi|k-j|/nn)) - c(k-j)` with
/// `c(m) = sum_{j=1}^{(nn-1)/2} cos(2 pi j m/nn)/j`; on the diagonal
/// `log|sigma'| - c(0)`. The matrix is symmetric by construction.
pub fn assemble_system(nodes: &[Complex64]) -> Result<RSystem> {
    let nn = nodes.len();
    if nn < 3 || nn % 2 == 0 {
        return Err(Error::BadInput("node count must be odd and at least 3"));
    }
    let nh = (nn - 1) / 2;
    let spa = spectral_derivative_abs(nodes)?;

    // c(m) is even in m mod nn; tabulate the half range and mirror.
    let mut c = vec![0.0f64; nh + 1];
    for (m, cm) in c.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 1..=nh {
            acc += (2.0 * PI * (j * m) as f64 / nn as f64).cos() / j as f64;
        }
        *cm = acc;
    }
    let c_at = |m: usize| c[m.min(nn - m)];
    // log|e^{i tau_k} - e^{i tau_j}| for equispaced angles.
    let mut unit_log = vec![0.0f64; nh + 1];
    for (m, lm) in unit_log.iter_mut().enumerate().skip(1) {
        *lm = (2.0 * (PI * m as f64 / nn as f64).sin()).ln();
    }
    let unit_at = |m: usize| unit_log[m.min(nn - m)];

    let mut a = vec![0.0f64; nn * nn];
    for k in 0..nn {
        for j in (k + 1)..nn {
            let dist = (nodes[k] - nodes[j]).norm();
            if dist < 1e-15 {
                return Err(Error::CoincidentNodes { i: k, j });
            }
            let v = dist.ln() - unit_at(j - k) - c_at(j - k);
            a[k * nn + j] = v;
            a[j * nn + k] = v;
        }
        if spa[k] <= 0.0 {
            return Err(Error::BadInput("vanishing boundary derivative"));
        }
        a[k * nn + k] = spa[k].ln() - c[0];
    }
    RSystem::new(nn, a, vec![0.0; nn])
}

/// Solve for the boundary density.
///
/// The plain system `M q = -b0` with `b0_j = log|sigma_j|` is used when the
/// 1-norm condition estimate stays at or below 1e4. Past that (or when
/// factoring fails outright), the boundary is at conductor capacity one and
/// the all-ones vector is in the numerical kernel; the translated system
/// `(M - E) q = -(b0 - e)` is solved instead. Either way the density
/// reproduces the same potential.
pub fn solve_density(nodes: &[Complex64]) -> Result<DensitySolution> {
    let nn = nodes.len();
    let spa = spectral_derivative_abs(nodes)?;
    let b0: Vec<f64> = nodes.iter().map(|z| z.norm().ln()).collect();

    let sys = assemble_system(nodes)?;
    let norm1 = sys.norm_1();
    let rhs: Vec<f64> = b0.iter().map(|v| -v).collect();

    let mut cond_estimate = f64::INFINITY;
    let plain = match LuFactors::factor(nn, sys.a) {
        Ok(lu) => {
            cond_estimate = lu.cond1_estimate(norm1);
            if cond_estimate <= 1e4 {
                Some(lu.solve(&rhs))
            } else {
                None
            }
        }
        Err(Error::SingularSystem { .. }) => None,
        Err(e) => return Err(e),
    };

    let (q, translated) = match plain {
        Some(q) => (q, false),
        None => {
            let sys = assemble_system(nodes)?;
            let mut a = sys.a;
            for v in a.iter_mut() {
                *v -= 1.0;
            }
            let rhs: Vec<f64> = b0.iter().map(|v| 1.0 - v).collect();
            let lu = LuFactors::factor(nn, a)?;
            (lu.solve(&rhs), true)
        }
    };

    Ok(DensitySolution {
        nodes: nodes.to_vec(),
        q,
        sigma_prime_abs: spa,
        translated,
        cond_estimate,
    })
}

/// Relative residual of the density in the system it was solved from.
/// Reassembles the matrix, so this costs another O(nn^2) pass.
pub fn collocation_residual(sol: &DensitySolution) -> Result<f64> {
    let sys = assemble_system(&sol.nodes)?;
    let b0: Vec<f64> = sol.nodes.iter().map(|z| z.norm().ln()).collect();
    let (a, rhs): (Vec<f64>, Vec<f64>) = if sol.translated {
        (
            sys.a.iter().map(|v| v - 1.0).collect(),
            b0.iter().map(|v| 1.0 - v).collect(),
        )
    } else {
        (sys.a, b0.iter().map(|v| -v).collect())
    };
    let sys = RSystem::new(sol.nodes.len(), a, rhs)?;
    Ok(crate::matrix::residual_inf(&sys, &sol.q))
}

/// Cauchy sums `S_k = sum_j q_j / sigma_j^k`, `k = 1..4`. For a boundary
/// symmetric about the real axis these are real up to rounding.
pub fn cauchy_sums(sol: &DensitySolution) -> [Complex64; 4] {
    let mut s = [Complex64::new(0.0, 0.0); 4];
    for (z, &qj) in sol.nodes.iter().zip(sol.q.iter()) {
        let inv = Complex64::new(1.0, 0.0) / z;
        let mut p = inv;
        for sk in s.iter_mut() {
            *sk += p * qj;
            p *= inv;
        }
    }
    s
}

/// Potential value and derivatives at the origin:
/// `u(0) = sum q_j log|sigma_j|`, `u^(k)(0) = -(k-1)! Re S_k`.
///
/// Errors with `OriginOutside` unless the node polygon winds exactly once
/// around 0 (tolerance 1e-6 relative to a full turn).
pub fn u_derivs_at_zero(sol: &DensitySolution) -> Result<[f64; 5]> {
    let nn = sol.nodes.len();
    let mut winding = 0.0;
    for i in 0..nn {
        let z0 = sol.nodes[i];
        let z1 = sol.nodes[(i + 1) % nn];
        winding += (z1 / z0).arg();
    }
    let turns = winding / (2.0 * PI);
    if (turns - 1.0).abs() > 1e-6 {
        return Err(Error::OriginOutside { winding: turns });
    }

    let u0: f64 = sol
        .nodes
        .iter()
        .zip(sol.q.iter())
        .map(|(z, &qj)| qj * z.norm().ln())
        .sum();
    let s = cauchy_sums(sol);
    Ok([u0, -s[0].re, -s[1].re, -2.0 * s[2].re, -6.0 * s[3].re])
}

/// Map derivatives at the origin from the potential derivatives: with
/// `gp = e^{u(0)}`,
/// `g'  = gp`,
/// `g'' = 2 gp u'`,
/// `g'''= 3 gp (u'^2 + u'')`,
/// and so on through the fifth derivative by the same exponential chain.
pub fn g_derivs(u: &[f64; 5]) -> [f64; 5] {
    let gp = u[0].exp();
    let (u1, u2, u3, u4) = (u[1], u[2], u[3], u[4]);
    [
        gp,
        2.0 * gp * u1,
        3.0 * gp * (u1 * u1 + u2),
        4.0 * gp * (3.0 * u1 * u2 + u1 * u1 * u1 + u3),
        5.0 * gp * (u1.powi(4) + 6.0 * u1 * u1 * u2 + 4.0 * u1 * u3 + 3.0 * u2 * u2 + u4),
    ]
}

/// Image of the order-`n` KMS matrix under the Taylor polynomial of `g`.
/// Exact for `n <= 6` because the matrix is nilpotent of order `n`.
pub fn g_of_a(n: usize, g: &[f64; 5]) -> Result<CMatrix> {
    let a = build_kms(n)?.matrix;
    let factorial = [1.0, 2.0, 6.0, 24.0, 120.0];
    let mut acc = CMatrix::zeros(n, n);
    let mut power = CMatrix::identity(n);
    for m in 0..5 {
        power = power.mul(&a);
        if power.max_abs() == 0.0 {
            break;
        }
        acc = acc.add(&power.scale(Complex64::new(g[m] / factorial[m], 0.0)));
    }
    Ok(acc)
}

/// Full per-order pipeline output.
#[derive(Debug, Clone)]
pub struct KmsRun {
    pub k: usize,
    pub n_input: usize,
    pub nn: usize,
    pub n_flat: usize,
    pub translated: bool,
    pub cond_estimate: f64,
    pub data: ConformalData,
}

/// Discretize, solve, and differentiate for the order-`k` KMS matrix with
/// `n_input + 1` algebraic-arc samples.
pub fn analyze_kms(k: usize, n_input: usize) -> Result<KmsRun> {
    let disc = discretize_boundary(k, n_input)?;
    let sol = solve_density(&disc.nodes)?;
    let u = u_derivs_at_zero(&sol)?;
    let g = g_derivs(&u);
    let m = g_of_a(k, &g)?;
    Ok(KmsRun {
        k,
        n_input,
        nn: disc.nn(),
        n_flat: disc.n_flat,
        translated: sol.translated,
        cond_estimate: sol.cond_estimate,
        data: ConformalData { u, g, m },
    })
}

/// One rung of a refinement ladder, keyed by total node count.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub total: usize,
    pub n_input: usize,
    /// First Taylor coefficient `g'(0)`.
    pub a: f64,
    /// Second Toeplitz entry `g'(0) + g''(0)/2`.
    pub b: f64,
    /// Second map derivative `g''(0)`.
    pub g2: f64,
    /// `|a - a_ref| * total^4`; bounded iff convergence is fourth order.
    pub a_ratio: f64,
    pub b_ratio: f64,
    pub g2_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub k: usize,
    pub ref_total: usize,
    pub ref_a: f64,
    pub ref_b: f64,
    pub ref_g2: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Log-log slope of `|a - a_ref|` against total node count.
    pub slope_a: f64,
    pub slope_b: f64,
}

/// Run the pipeline over a ladder of total node counts; the largest count
/// serves as the reference. Each count must be exactly realizable.
pub fn convergence_study(k: usize, totals: &[usize]) -> Result<ConvergenceTable> {
    if totals.len() < 3 {
        return Err(Error::BadInput("ladder needs at least three rungs"));
    }
    let ref_total = *totals.iter().max().expect("nonempty ladder");
    let mut pairs = Vec::new();
    for &total in totals {
        let n_input = input_for_total(k, total)?;
        let run = analyze_kms(k, n_input)?;
        let a = run.data.g[0];
        let g2 = run.data.g[1];
        pairs.push((total, n_input, a, a + g2 / 2.0, g2));
    }
    let &(_, _, ref_a, ref_b, ref_g2) =
        pairs.iter().find(|p| p.0 == ref_total).expect("reference rung present");

    let mut rows = Vec::new();
    let mut pts_a = Vec::new();
    let mut pts_b = Vec::new();
    for (total, n_input, a, b, g2) in pairs {
        if total == ref_total {
            continue;
        }
        let scale = (total as f64).powi(4);
        let (ea, eb, eg2) = ((a - ref_a).abs(), (b - ref_b).abs(), (g2 - ref_g2).abs());
        rows.push(ConvergenceRow {
            total,
            n_input,
            a,
            b,
            g2,
            a_ratio: ea * scale,
            b_ratio: eb * scale,
            g2_ratio: eg2 * scale,
        });
        if ea > 0.0 {
            pts_a.push(((total as f64).ln(), ea.ln()));
        }
        if eb > 0.0 {
            pts_b.push(((total as f64).ln(), eb.ln()));
        }
    }
    Ok(ConvergenceTable {
        k,
        ref_total,
        ref_a,
        ref_b,
        ref_g2,
        rows,
        slope_a: lsq_slope(&pts_a),
        slope_b: lsq_slope(&pts_b),
    })
}

fn input_for_total(k: usize, total: usize) -> Result<usize> {
    crate::kms::input_matching_total(k, total)
        .ok_or(Error::BadInput("ladder rung is not a realizable total node count"))
}

fn lsq_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(nn: usize, radius: f64, center: Complex64) -> Vec<Complex64> {
        (0..nn)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / nn as f64;
                center + Complex64::new(radius * t.cos(), radius * t.sin())
            })
            .collect()
    }

    #[test]
    fn even_node_count_is_rejected() {
        let nodes = circle(8, 1.0, Complex64::new(0.0, 0.0));
        assert!(matches!(assemble_system(&nodes), Err(Error::BadInput(_))));
    }

    #[test]
    fn coincident_nodes_are_detected() {
        let mut nodes = circle(9, 1.0, Complex64::new(0.0, 0.0));
        nodes[4] = nodes[2];
        assert!(matches!(
            assemble_system(&nodes),
            Err(Error::CoincidentNodes { .. })
        ));
    }

    #[test]
    fn unit_circle_system_entries() {
        // On the unit circle log-distances cancel against the unit-circle
        // reference, leaving -c(k-j); the spectral derivative has modulus
        // one, leaving -c(0) on the diagonal.
        let nn = 9;
        let nodes = circle(nn, 1.0, Complex64::new(0.0, 0.0));
        let sys = assemble_system(&nodes).unwrap();
        let nh = (nn - 1) / 2;
        let c = |m: usize| -> f64 {
            (1..=nh)
                .map(|j| (2.0 * PI * (j * m) as f64 / nn as f64).cos() / j as f64)
                .sum()
        };
        for k in 0..nn {
            for j in 0..nn {
                let want = -c(if k == j { 0 } else { k.abs_diff(j) });
                assert!(
                    (sys.a[k * nn + j] - want).abs() < 1e-12,
                    "entry ({k},{j})"
                );
            }
        }
    }

    #[test]
    fn three_node_constants() {
        // nn = 3: c(0) = 1, c(1) = cos(2 pi/3) = -1/2.
        let nodes = circle(3, 1.0, Complex64::new(0.0, 0.0));
        let sys = assemble_system(&nodes).unwrap();
        assert!((sys.a[0] + 1.0).abs() < 1e-14);
        assert!((sys.a[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn unit_circle_density_is_translated_and_constant() {
        // The unit circle has conductor capacity one: the plain system is
        // rank deficient and the translated path must engage, giving the
        // constant density with sum -1.
        let nn = 95;
        let sol = solve_density(&circle(nn, 1.0, Complex64::new(0.0, 0.0))).unwrap();
        assert!(sol.translated);
        for &qj in &sol.q {
            assert!((qj + 1.0 / nn as f64).abs() < 1e-10);
        }
        let u = u_derivs_at_zero(&sol).unwrap();
        for v in u {
            assert!(v.abs() < 1e-10, "u entry {v}");
        }
        let g = g_derivs(&u);
        assert!((g[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn disk_oracle_scales_the_derivative() {
        // For the disk of radius r about 0 the map is z/r: u(0) = -log r,
        // all higher potential derivatives vanish.
        for r in [0.5, 2.0] {
            let sol = solve_density(&circle(95, r, Complex64::new(0.0, 0.0))).unwrap();
            assert!(!sol.translated);
            assert!(collocation_residual(&sol).unwrap() < 1e-9);
            let u = u_derivs_at_zero(&sol).unwrap();
            assert!((u[0] + r.ln()).abs() < 1e-9);
            for v in &u[1..] {
                assert!(v.abs() < 1e-9);
            }
            let g = g_derivs(&u);
            assert!((g[0] - 1.0 / r).abs() < 1e-9);
        }
    }

    #[test]
    fn off_center_disk_oracle() {
        // Disk of radius 1.3 about 0.3: the Riemann map normalized at the
        // origin has g'(0) = r/(r^2 - c^2) = 0.8125.
        let sol = solve_density(&circle(191, 1.3, Complex64::new(0.3, 0.0))).unwrap();
        let u = u_derivs_at_zero(&sol).unwrap();
        let g = g_derivs(&u);
        assert!((g[0] - 0.8125).abs() < 1e-9, "g'(0) = {}", g[0]);
    }

    #[test]
    fn origin_outside_is_reported() {
        let sol = solve_density(&circle(95, 1.0, Complex64::new(5.0, 0.0))).unwrap();
        assert!(matches!(
            u_derivs_at_zero(&sol),
            Err(Error::OriginOutside { .. })
        ));
    }

    #[test]
    fn map_derivative_chain_anchors() {
        let g = g_derivs(&[0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(g, [1.0, 0.0, 0.0, 0.0, 0.0]);
        // With only u' = p nonzero the chain collapses to m gp p^{m-1}.
        let p = 0.3;
        let g = g_derivs(&[0.0, p, 0.0, 0.0, 0.0]);
        let want = [1.0, 2.0 * p, 3.0 * p * p, 4.0 * p * p * p, 5.0 * p.powi(4)];
        for (a, b) in g.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        // u(0) scales every derivative by e^{u(0)}.
        let s = 0.7f64;
        let g1 = g_derivs(&[s.ln(), 0.2, -0.1, 0.05, 0.0]);
        let g2 = g_derivs(&[0.0, 0.2, -0.1, 0.05, 0.0]);
        for (a, b) in g1.iter().zip(g2.iter()) {
            assert!((a - s * b).abs() < 1e-14);
        }
    }

    #[test]
    fn matrix_image_is_upper_toeplitz() {
        let g = [1.25, -0.5, 0.0, 0.0, 0.0];
        let m = g_of_a(3, &g).unwrap();
        // M = g' A + g''/2 A^2: first row (0, a, a + g''/2).
        assert!((m.at(0, 1).re - 1.25).abs() < 1e-15);
        assert!((m.at(0, 2).re - 1.0).abs() < 1e-15);
        assert!((m.at(1, 2).re - 1.25).abs() < 1e-15);
        assert_eq!(m.at(1, 0).re, 0.0);
        assert_eq!(m.at(2, 2).re, 0.0);
        // Toeplitz: every superdiagonal is constant.
        let m = g_of_a(5, &[1.0, 0.3, -0.2, 0.1, 0.05]).unwrap();
        for d in 1..5 {
            for i in 0..(5 - d - 1) {
                assert!((m.at(i, i + d) - m.at(i + 1, i + d + 1)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kms_order_three_reference_coefficient() {
        // Default-density run: first map coefficient matches the reference
        // to well under the discretization error.
        let run = analyze_kms(3, 500).unwrap();
        assert_eq!(run.nn, 1205);
        assert!(!run.translated);
        assert!((run.data.g[0] - 1.360374515).abs() < 1e-8, "a = {}", run.data.g[0]);
        let b = run.data.g[0] + run.data.g[1] / 2.0;
        assert!((b - 0.710915425).abs() < 1e-8, "b = {b}");
        assert!(run.data.g[1] < 0.0);
    }

    #[test]
    fn short_ladder_shows_fourth_order() {
        let table = convergence_study(3, &[23, 47, 95, 191]).unwrap();
        assert_eq!(table.ref_total, 191);
        assert_eq!(table.rows.len(), 3);
        for w in table.rows.windows(2) {
            // Errors against the reference shrink monotonically.
            let e0 = w[0].a_ratio / (w[0].total as f64).powi(4);
            let e1 = w[1].a_ratio / (w[1].total as f64).powi(4);
            assert!(e1 < e0);
        }
        assert!((table.slope_a + 4.0).abs() < 1.0, "slope {}", table.slope_a);
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn disk_density_residual_is_small(
                r in 0.4..2.5f64,
                nn_half in 20usize..60,
            ) {
                let nn = 2 * nn_half + 1;
                let sol = solve_density(&circle(nn, r, Complex64::new(0.0, 0.0))).unwrap();
                prop_assert!(collocation_residual(&sol).unwrap() < 1e-9);
                let u = u_derivs_at_zero(&sol).unwrap();
                prop_assert!((u[0] + r.ln()).abs() < 1e-8);
            }

            #[test]
            fn cauchy_sums_nearly_real_for_symmetric_boundaries(
                k in 3usize..=6,
                n in 12usize..24,
            ) {
                let disc = match discretize_boundary(k, n) {
                    Ok(d) => d,
                    Err(_) => return Ok(()),
                };
                let sol = solve_density(&disc.nodes).unwrap();
                for s in cauchy_sums(&sol) {
                    prop_assert!(s.im.abs() < 1e-8, "Im = {}", s.im);
                }
            }
        }
    }
}
