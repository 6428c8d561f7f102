//! Dense complex matrices and the few decompositions the pipeline needs.
//!
//! Everything is row-major `Vec`-backed. Sizes stay modest: the collocation
//! systems reach a few thousand rows, all other matrices have order below
//! ten, so unblocked O(n^3) kernels are the right tool.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Smallest pivot magnitude accepted during elimination.
const PIVOT_FLOOR: f64 = 1e-300;

/// Dense complex matrix, row-major.
///
/// Constructors reject non-finite entries; routines may assume the data is
/// finite throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::BadInput("non-finite matrix entry"));
                }
                m.data[i * cols + j] = v;
            }
        }
        Ok(m)
    }

    /// Upper-triangular Toeplitz matrix: zero diagonal, `offsets[d]` on
    /// superdiagonal `d + 1`.
    pub fn upper_toeplitz(n: usize, offsets: &[Complex64]) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                if let Some(&v) = offsets.get(j - i - 1) {
                    m.data[i * n + j] = v;
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(v.re.is_finite() && v.im.is_finite());
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.data[i * self.cols + j] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = CMatrix::identity(n);
        for col in 0..n {
            let mut piv = col;
            let mut piv_abs = a[col * n + col].norm();
            for r in (col + 1)..n {
                let v = a[r * n + col].norm();
                if v > piv_abs {
                    piv = r;
                    piv_abs = v;
                }
            }
            if piv_abs < PIVOT_FLOOR {
                return Err(Error::SingularSystem { pivot: piv_abs });
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv.data[col * n + j] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let t = factor * a[col * n + j];
                    a[r * n + j] -= t;
                    let t = factor * inv.data[col * n + j];
                    inv.data[r * n + j] -= t;
                }
            }
        }
        Ok(inv)
    }

    /// Largest singular value, by power iteration on `A^H A`.
    ///
    /// Deterministic all-ones start, Rayleigh-increment stop at 1e-14
    /// relative, 10_000-step cap, one fixed restart perturbation. If both
    /// starts stall (tightly clustered top singular values), falls back to
    /// the Jacobi eigensolver on `A^H A`, which does not care about
    /// clustering; `NoConvergence` is only reported if that also fails.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let b = self.adjoint().mul(self);
        let m = b.rows;
        let scale = b.max_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }

        let start_plain: Vec<Complex64> =
            vec![Complex64::new(1.0 / (m as f64).sqrt(), 0.0); m];
        let start_perturbed: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new(1.0 + 1e-3 * (i + 1) as f64, 0.0))
            .collect();

        for start in [start_plain, start_perturbed] {
            if let Some(lambda) = power_top_eig(&b, start) {
                return Ok(lambda.max(0.0).sqrt());
            }
        }
        let eigs = b.hermitian_eigs()?;
        match eigs.last() {
            Some(&top) => Ok(top.max(0.0).sqrt()),
            None => Err(Error::NoConvergence { iterations: 10_000 }),
        }
    }

    /// 2-norm condition number `|A| * |A^-1|`.
    pub fn cond2(&self) -> Result<f64> {
        let inv = self.inverse()?;
        Ok(self.spectral_norm()? * inv.spectral_norm()?)
    }

    /// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi with
    /// phase rotations. Rejects input whose asymmetry exceeds 1e-13
    /// (relative to the largest entry).
    pub fn hermitian_eigs(&self) -> Result<Vec<f64>> {
        assert_eq!(self.rows, self.cols, "eigensolver needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(Vec::new());
        }
        let scale = self.max_abs().max(1.0);
        let mut max_asym: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.at(i, j) - self.at(j, i).conj()).norm();
                max_asym = max_asym.max(d);
            }
        }
        if max_asym > 1e-13 * scale {
            return Err(Error::NotHermitian { max_asymmetry: max_asym });
        }

        let mut a = self.clone();
        // Symmetrize exactly so rounding in the input cannot drift.
        for i in 0..n {
            for j in (i + 1)..n {
                let v = (a.at(i, j) + a.at(j, i).conj()) * 0.5;
                a.set(i, j, v);
                a.set(j, i, v.conj());
            }
            let d = a.at(i, i).re;
            a.set(i, i, Complex64::new(d, 0.0));
        }

        let norm = a.frobenius().max(1.0);
        let mut converged = false;
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += 2.0 * a.at(i, j).norm_sqr();
                }
            }
            if off.sqrt() <= 1e-14 * norm {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: 100 });
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        Ok(eigs)
    }
}

/// One step of the power iteration loop; returns the converged top
/// eigenvalue of the Hermitian PSD matrix `b`, or `None` on stall.
fn power_top_eig(b: &CMatrix, mut v: Vec<Complex64>) -> Option<f64> {
    let nrm = vec_norm(&v);
    if nrm == 0.0 {
        return None;
    }
    for x in v.iter_mut() {
        *x /= nrm;
    }
    let mut lambda_prev = f64::INFINITY;
    for _ in 0..10_000 {
        let w = b.matvec(&v);
        let lambda: f64 = v.iter().zip(w.iter()).map(|(x, y)| (x.conj() * y).re).sum();
        let wn = vec_norm(&w);
        if wn == 0.0 {
            // v landed in the kernel; with a PSD matrix this start carries
            // no information about the top eigenvalue.
            return if b.max_abs() == 0.0 { Some(0.0) } else { None };
        }
        if (lambda - lambda_prev).abs() <= 1e-14 * lambda.abs().max(1.0) {
            return Some(lambda);
        }
        lambda_prev = lambda;
        v = w;
        for x in v.iter_mut() {
            *x /= wn;
        }
    }
    None
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Annihilate the (p, q) entry of a Hermitian matrix with a unitary phase
/// rotation, updating rows and columns p and q in place.
fn jacobi_rotate(a: &mut CMatrix, p: usize, q: usize) {
    let n = a.rows();
    let beta = a.at(p, q);
    let beta_abs = beta.norm();
    if beta_abs == 0.0 {
        return;
    }
    let alpha = a.at(p, p).re;
    let gamma = a.at(q, q).re;
    let w = beta / beta_abs; // phase e^{i phi}
    let tau = (gamma - alpha) / (2.0 * beta_abs);
    // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0; the sign convention
    // belongs to the rotation [[c, -s w], [s conj(w), c]] used below.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns p and q: (col_p, col_q) <- (c*col_p + s*conj(w)*col_q,
    //                                     -s*w*col_p + c*col_q).
    for k in 0..n {
        let akp = a.at(k, p);
        let akq = a.at(k, q);
        a.set(k, p, akp * c + akq * (w.conj() * s));
        a.set(k, q, akq * c - akp * (w * s));
    }
    // Rows p and q: (row_p, row_q) <- (c*row_p + s*w*row_q,
    //                                  -s*conj(w)*row_p + c*row_q).
    for k in 0..n {
        let apk = a.at(p, k);
        let aqk = a.at(q, k);
        a.set(p, k, apk * c + aqk * (w * s));
        a.set(q, k, aqk * c - apk * (w.conj() * s));
    }
    // The 2x2 block is now diagonal up to rounding; pin it there.
    debug_assert!(
        a.at(p, q).norm() <= 1e-8 * (alpha.abs() + gamma.abs() + beta_abs + 1.0),
        "rotation failed to annihilate the target entry"
    );
    let app = a.at(p, p).re;
    let aqq = a.at(q, q).re;
    a.set(p, p, Complex64::new(app, 0.0));
    a.set(q, q, Complex64::new(aqq, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
}

/// Real symmetric linear system `a x = rhs`, row-major.
#[derive(Debug, Clone)]
pub struct RSystem {
    pub dim: usize,
    pub a: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl RSystem {
    pub fn new(dim: usize, a: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        if a.len() != dim * dim || rhs.len() != dim {
            return Err(Error::BadInput("system buffer lengths do not match dim"));
        }
        if a.iter().chain(rhs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::BadInput("non-finite system entry"));
        }
        Ok(RSystem { dim, a, rhs })
    }

    pub fn norm_inf(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| self.a[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_1(&self) -> f64 {
        let n = self.dim;
        let mut cols = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..n {
                cols[j] += self.a[i * n + j].abs();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

/// LU factorization (partial pivoting) of a real square matrix, consuming
/// the matrix buffer so the multi-thousand-row collocation systems are
/// factored without a second copy.
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl LuFactors {
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut p = col;
            let mut p_abs = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > p_abs {
                    p = r;
                    p_abs = v;
                }
            }
            if p_abs < PIVOT_FLOOR {
                return Err(Error::SingularSystem { pivot: p_abs });
            }
            if p != col {
                piv.swap(col, p);
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                }
            }
            let d = a[col * n + col];
            for r in (col + 1)..n {
                let f = a[r * n + col] / d;
                a[r * n + col] = f;
                if f != 0.0 {
                    let (head, tail) = a.split_at_mut(r * n);
                    let src = &head[col * n + col + 1..col * n + n];
                    let dst = &mut tail[col + 1..n];
                    for (x, y) in dst.iter_mut().zip(src.iter()) {
                        *x -= f * y;
                    }
                }
            }
        }
        Ok(LuFactors { n, lu: a, piv })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }

    /// Hager's 1-norm condition estimate. The factored matrix is symmetric
    /// here, so the transpose solves reuse the same factorization.
    pub fn cond1_estimate(&self, a_norm1: f64) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut best = 0.0f64;
        for _ in 0..5 {
            let y = self.solve(&x);
            let est: f64 = y.iter().map(|v| v.abs()).sum();
            best = best.max(est);
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve(&xi);
            let (mut j_max, mut z_max) = (0, 0.0f64);
            for (j, v) in z.iter().enumerate() {
                if v.abs() > z_max {
                    z_max = v.abs();
                    j_max = j;
                }
            }
            let zx: f64 = z.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            if z_max <= zx {
                break;
            }
            x = vec![0.0; n];
            x[j_max] = 1.0;
        }
        best * a_norm1
    }
}

/// Solve a real symmetric system by LU with partial pivoting.
pub fn solve_sym(sys: &RSystem) -> Result<Vec<f64>> {
    let lu = LuFactors::factor(sys.dim, sys.a.clone())?;
    Ok(lu.solve(&sys.rhs))
}

/// Relative residual `|a x - rhs|_inf / (|a|_inf |x|_inf + |rhs|_inf)`.
pub fn residual_inf(sys: &RSystem, x: &[f64]) -> f64 {
    let n = sys.dim;
    let mut r_max = 0.0f64;
    for i in 0..n {
        let mut acc = -sys.rhs[i];
        for j in 0..n {
            acc += sys.a[i * n + j] * x[j];
        }
        r_max = r_max.max(acc.abs());
    }
    let x_max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let b_max = sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let denom = sys.norm_inf() * x_max + b_max;
    if denom == 0.0 {
        r_max
    } else {
        r_max / denom
    }
}
