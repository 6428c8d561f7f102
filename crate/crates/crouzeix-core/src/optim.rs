//! Deterministic Nelder-Mead minimizer.
//!
//! Fixed coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2),
//! fixed simplex initialization, and value-then-lexicographic ordering, so
//! identical inputs give bit-identical iterates on every run.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_iter: usize,
    /// Offset added to each coordinate to seed the simplex.
    pub init_step: f64,
    pub ftol: f64,
    pub xtol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_iter: 2000, init_step: 1e-3, ftol: 1e-13, xtol: 1e-9 }
    }
}

/// Minimize `f` starting from `x0`. Returns the best vertex and its value;
/// for an empty `x0` the objective is evaluated once and returned as is.
pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: Options) -> (Vec<f64>, f64) {
    let dim = x0.len();
    if dim == 0 {
        let v = f(x0);
        return (Vec::new(), v);
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = f(x0);
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.init_step;
        let v = f(&x);
        simplex.push((x, v));
    }

    let order = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| {
        a.1.partial_cmp(&b.1)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| {
                for (p, q) in a.0.iter().zip(b.0.iter()) {
                    match p.partial_cmp(q) {
                        Some(core::cmp::Ordering::Equal) | None => continue,
                        Some(o) => return o,
                    }
                }
                core::cmp::Ordering::Equal
            })
    };

    for _ in 0..opts.max_iter {
        simplex.sort_by(order);
        let f_best = simplex[0].1;
        let f_worst = simplex[dim].1;
        let spread = f_worst - f_best;
        let mut diam = 0.0f64;
        for v in &simplex[1..] {
            for (a, b) in v.0.iter().zip(simplex[0].0.iter()) {
                diam = diam.max((a - b).abs());
            }
        }
        if spread <= opts.ftol * (1.0 + f_best.abs()) && diam <= opts.xtol {
            break;
        }

        // Centroid of all vertices but the worst.
        let mut centroid = Vec::with_capacity(dim);
        for c in 0..dim {
            let s: f64 = simplex[..dim].iter().map(|v| v.0[c]).sum();
            centroid.push(s / dim as f64);
        }
        let worst = simplex[dim].0.clone();
        let combine = |t: f64| -> Vec<f64> {
            centroid.iter().zip(worst.iter()).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = combine(1.0);
        let fr = f(&xr);
        if fr < f_best {
            let xe = combine(2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[dim] = (xe, fe);
            } else {
                simplex[dim] = (xr, fr);
            }
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < f_worst {
                let x = combine(0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = combine(-0.5);
                let v = f(&x);
                (x, v)
            };
            if fc < f_worst.min(fr) {
                simplex[dim] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for v in simplex[1..].iter_mut() {
                    for (x, b) in v.0.iter_mut().zip(best.iter()) {
                        *x = b + 0.5 * (*x - b);
                    }
                    v.1 = f(&v.0);
                }
            }
        }
    }
    simplex.sort_by(order);
    let (x, v) = simplex.swap_remove(0);
    (x, v)
}
