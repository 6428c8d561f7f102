//! KMS matrices and the boundary of their numerical range.
//!
//! For the order-`k` strictly upper triangular all-ones matrix, the boundary
//! of the numerical range consists of an algebraic arc
//! `phi_k(theta) = (1/k) * sum_{j=1}^{k-1} j e^{i(k-j)theta}` for
//! `|theta| <= 2pi/k`, closed by the vertical segment `Re z = -1/2`,
//! `|Im z| <= cot(pi/k)/2`. The remaining parameter range of the same
//! algebraic curve lies inside the range and carries cusps at angles
//! `(2j-1)pi/k`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::matrix::{CMatrix, Complex64};
use crate::{Error, Result};

/// Strictly upper triangular matrix of ones.
#[derive(Debug, Clone)]
pub struct KmsMatrix {
    pub n: usize,
    pub matrix: CMatrix,
}

pub fn build_kms(n: usize) -> Result<KmsMatrix> {
    if n < 2 {
        return Err(Error::BadDimension { n, min: 2 });
    }
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        if j > i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    Ok(KmsMatrix { n, matrix })
}

/// Point on the algebraic boundary curve at parameter `theta`.
pub fn boundary_point(k: usize, theta: f64) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for j in 1..k {
        let phase = (k - j) as f64 * theta;
        z += (j as f64) * Complex64::new(phase.cos(), phase.sin());
    }
    z / k as f64
}

/// Geometry summary of the numerical-range boundary for order `k`.
#[derive(Debug, Clone)]
pub struct BoundaryDescription {
    pub k: usize,
    /// The algebraic arc covers `|theta| <= theta_max`.
    pub theta_max: f64,
    /// The flat side is `Re z = -1/2`, `|Im z| <= segment_im_max`.
    pub segment_im_max: f64,
    /// Angles `(2j-1)pi/k`, `j = 2..k-1`, where the interior continuation
    /// of the algebraic curve has cusps.
    pub cusp_angles: Vec<f64>,
    /// Points `-1/2 + i/(2 tan(j pi/k))`, `j = 1..k-1`, where the curve
    /// meets the flat side.
    pub flat_points: Vec<Complex64>,
}

pub fn boundary_description(k: usize) -> Result<BoundaryDescription> {
    if k < 3 {
        return Err(Error::BadDimension { n: k, min: 3 });
    }
    let theta_max = 2.0 * PI / k as f64;
    let segment_im_max = 0.5 / (PI / k as f64).tan();
    let cusp_angles = (2..=(k - 1)).map(|j| (2 * j - 1) as f64 * PI / k as f64).collect();
    let flat_points = (1..k)
        .map(|j| {
            let t = (j as f64 * PI / k as f64).tan();
            Complex64::new(-0.5, 0.5 / t)
        })
        .collect();
    Ok(BoundaryDescription { k, theta_max, segment_im_max, cusp_angles, flat_points })
}

/// Tangential polynomial `T_k(u, v, w)`, the degree-`k` homogeneous form
/// whose zero set carries the tangency structure of the boundary curve.
///
/// `T_1 = w` and
/// `T_{k+1} = w T_k + [(w - (u+iv)/2)^k - (w - (u-iv)/2)^k] (u^2+v^2)/(4iv)`;
/// the bracket is `2i Im((w - (u+iv)/2)^k)`, so every iterate is real.
/// For `|v|` below 1e-8 relative to `hypot(u, v)` the recursion divides by a
/// vanishing `v`, and the closed form
/// `((-1)^{k+1}/sin phi) Im(e^{-i phi} (e^{i phi}/2 - w)^k)` on the
/// normalized direction takes over, with the `sin phi -> 0` limit resolved
/// by one l'Hopital step.
pub fn tangential_poly(k: usize, u: f64, v: f64, w: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::BadDimension { n: k, min: 1 });
    }
    if u == 0.0 && v == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let r = u.hypot(v);
    if v.abs() >= 1e-8 * r {
        let p = Complex64::new(u * 0.5, v * 0.5);
        let base = Complex64::new(w, 0.0) - p;
        let coeff = (u * u + v * v) / (2.0 * v);
        let mut t = w;
        let mut base_pow = base;
        for _ in 1..k {
            t = w * t + base_pow.im * coeff;
            base_pow *= base;
        }
        Ok(t)
    } else {
        // Normalize to the unit direction circle, evaluate the closed form,
        // and undo the degree-k homogeneous scaling.
        let (un, vn, wn) = (u / r, v / r, w / r);
        let phi = vn.atan2(un);
        let e_neg = Complex64::new(phi.cos(), -phi.sin());
        let zeta = Complex64::new(0.5 * phi.cos() - wn, 0.5 * phi.sin());
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let s = phi.sin();
        let val = if s.abs() >= 1e-8 {
            (e_neg * zeta.powu(k as u32)).im / s
        } else {
            // l'Hopital at sin(phi) = 0: d/dphi of the numerator over
            // d/dphi of sin(phi).
            let i = Complex64::new(0.0, 1.0);
            let num_d = (-i * e_neg * zeta.powu(k as u32)
                + i * (k as f64 * 0.5) * zeta.powu(k as u32 - 1))
            .im;
            num_d / phi.cos()
        };
        Ok(sign * val * r.powi(k as i32))
    }
}

/// Quartic whose zero set contains the `k = 3` algebraic boundary arc:
/// `27|z|^4 - 18|z|^2 - 8 Re z - 1`.
pub fn cardioid_p(z: Complex64) -> f64 {
    let n2 = z.norm_sqr();
    27.0 * n2 * n2 - 18.0 * n2 - 8.0 * z.re - 1.0
}

/// Support function of the numerical range of `a` in direction `omega`:
/// the top eigenvalue of the Hermitian part of `e^{-i omega} a`.
pub fn support_function(a: &CMatrix, omega: f64) -> Result<f64> {
    let rot = Complex64::new(omega.cos(), -omega.sin());
    let ra = a.scale(rot);
    let herm = ra.add(&ra.adjoint()).scale(Complex64::new(0.5, 0.0));
    let eigs = herm.hermitian_eigs()?;
    eigs.last().copied().ok_or(Error::BadDimension { n: 0, min: 1 })
}

/// Closed boundary polygon used by the collocation solve.
///
/// Nodes run counterclockwise: `phi_k` samples at `theta_j = 2 pi j/(n k)`
/// for `j = 0..n`, then `n_flat` equispaced nodes descending the flat side,
/// then the conjugate mirror of the interior nodes. The conjugate half is
/// constructed by exact conjugation, so reversal-plus-conjugation is a
/// cyclic shift of the list bit-for-bit.
#[derive(Debug, Clone)]
pub struct BoundaryDiscretization {
    pub k: usize,
    pub n_input: usize,
    pub n_flat: usize,
    pub nodes: Vec<Complex64>,
}

/// Which boundary piece a node index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodePart {
    Algebraic,
    Flat,
}

impl BoundaryDiscretization {
    pub fn nn(&self) -> usize {
        self.nodes.len()
    }

    pub fn part_of(&self, idx: usize) -> NodePart {
        let nn = self.nn();
        assert!(idx < nn);
        let fold = if idx <= self.n_input + self.n_flat { idx } else { nn - idx };
        if fold <= self.n_input {
            NodePart::Algebraic
        } else {
            NodePart::Flat
        }
    }
}

/// Discretize the boundary with `n + 1` algebraic-arc samples on the upper
/// half; the flat-side spacing is chosen so the first mirrored node sits
/// half a step below the axis crossing.
pub fn discretize_boundary(k: usize, n: usize) -> Result<BoundaryDiscretization> {
    if k < 3 {
        return Err(Error::BadDimension { n: k, min: 3 });
    }
    if n < 4 {
        return Err(Error::BadDimension { n, min: 4 });
    }
    let step = 2.0 * PI / (n as f64 * k as f64);
    let mut nodes: Vec<Complex64> = (0..=n).map(|j| boundary_point(k, j as f64 * step)).collect();
    let corner = nodes[n];
    let h0 = (corner - nodes[n - 1]).norm();
    let n_flat_f = (corner.im / h0 - 0.5).trunc();
    if n_flat_f < 1.0 {
        return Err(Error::TooCoarse { k, n });
    }
    let n_flat = n_flat_f as usize;
    let h = corner.im / (n_flat as f64 + 0.5);
    for j in 1..=n_flat {
        nodes.push(Complex64::new(corner.re, corner.im - j as f64 * h));
    }
    let upper = nodes.len();
    for j in (1..upper).rev() {
        let z = nodes[j];
        nodes.push(Complex64::new(z.re, -z.im));
    }
    debug_assert_eq!(nodes.len(), 2 * (n + n_flat) + 1);
    Ok(BoundaryDiscretization { k, n_input: n, n_flat, nodes })
}

/// Smallest input `n` whose discretization has exactly `total` nodes, if
/// one exists. Lets callers key refinement ladders by total node count.
pub fn input_matching_total(k: usize, total: usize) -> Option<usize> {
    let mut n = 4;
    loop {
        if 2 * n + 3 > total {
            return None;
        }
        if let Ok(d) = discretize_boundary(k, n) {
            if d.nn() == total {
                return Some(n);
            }
            if d.nn() > total {
                return None;
            }
        }
        n += 1;
    }
}
