use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretize::SparseOperator;
use crate::{Error, Result};

/// Converged eigenpairs with unit Euclidean norm vectors.
#[derive(Debug, Clone)]
pub(crate) struct RawEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖A x − λ x‖ / λ` for unit `x`
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LobpcgOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub guard: usize,
    pub seed: u64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Appends the columns of `cand` to the orthonormal set `basis`, dropping near-dependent ones.
fn extend_orthonormal(basis: &mut Vec<Vec<f64>>, cand: Vec<Vec<f64>>) {
    for mut v in cand {
        let n0 = norm(&v);
        if !(n0 > 0.0) || !n0.is_finite() {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n0);
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let n1 = norm(&v);
        if n1 > 1e-10 {
            v.iter_mut().for_each(|x| *x /= n1);
            basis.push(v);
        }
    }
}

fn combine(cols: &[Vec<f64>], coef: &DMatrix<f64>, rows: std::ops::Range<usize>, j: usize) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (r, col) in rows.clone().zip(&cols[rows.start..rows.end]) {
        let c = coef[(r, j)];
        if c != 0.0 {
            axpy(c, col, &mut out);
        }
    }
    out
}

/// Locally optimal block preconditioned conjugate gradients for the `k` smallest eigenpairs.
pub(crate) fn lobpcg(
    a: &SparseOperator,
    pre: &dyn Fn(&[f64], &mut [f64]),
    k: usize,
    opts: LobpcgOptions,
) -> Result<RawEigen> {
    let n = a.dim();
    let m = (k + opts.guard).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            if j == 0 {
                vec![1.0; n]
            } else {
                (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()
            }
        })
        .collect();
    // precondition the random start so it is smooth
    for v in start.iter_mut().skip(1) {
        let mut z = vec![0.0; n];
        pre(v, &mut z);
        *v = z;
    }
    let mut x: Vec<Vec<f64>> = Vec::with_capacity(m);
    extend_orthonormal(&mut x, start);
    if x.len() < m {
        return Err(Error::Solver("could not build an independent starting block".into()));
    }
    let mut p: Vec<Vec<f64>> = Vec::new();
    let mut theta = vec![0.0; m];
    let mut ax: Vec<Vec<f64>> = x.iter().map(|v| a.mul(v)).collect();
    let mut residuals = vec![f64::INFINITY; m];

    for it in 0..=opts.max_iter {
        // Rayleigh–Ritz on span [X, W, P]
        let mut s = x.clone();
        if it > 0 {
            let mut w = Vec::new();
            for j in 0..m {
                if j < k && residuals[j] <= opts.tol {
                    continue;
                }
                let mut r = ax[j].clone();
                axpy(-theta[j], &x[j], &mut r);
                let mut z = vec![0.0; n];
                pre(&r, &mut z);
                w.push(z);
            }
            extend_orthonormal(&mut s, w);
            extend_orthonormal(&mut s, std::mem::take(&mut p));
        }
        let mut as_: Vec<Vec<f64>> = ax.clone();
        for v in &s[m..] {
            as_.push(a.mul(v));
        }
        let dim = s.len();
        let mut g = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (dot(&s[i], &as_[j]) + dot(&s[j], &as_[i]));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(g);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut coef = DMatrix::<f64>::zeros(dim, m);
        for (c, &o) in order.iter().take(m).enumerate() {
            coef.set_column(c, &eig.eigenvectors.column(o));
            theta[c] = eig.eigenvalues[o];
        }
        let new_x: Vec<Vec<f64>> = (0..m).map(|j| combine(&s, &coef, 0..dim, j)).collect();
        let new_ax: Vec<Vec<f64>> = (0..m).map(|j| combine(&as_, &coef, 0..dim, j)).collect();
        if dim > m {
            p = (0..m).map(|j| combine(&s, &coef, m..dim, j)).collect();
        }
        x = new_x;
        ax = new_ax;
        for j in 0..m {
            let mut r = ax[j].clone();
            axpy(-theta[j], &x[j], &mut r);
            residuals[j] = norm(&r) / (theta[j].abs() * norm(&x[j])).max(f64::MIN_POSITIVE);
        }
        if residuals[..k].iter().all(|&r| r <= opts.tol) {
            let mut vectors = x;
            vectors.truncate(k);
            for v in &mut vectors {
                let nv = norm(v);
                v.iter_mut().for_each(|e| *e /= nv);
            }
            return Ok(RawEigen {
                values: theta[..k].to_vec(),
                vectors,
                residuals: residuals[..k].to_vec(),
                iterations: it,
            });
        }
    }
    let worst = residuals[..k].iter().cloned().fold(0.0, f64::max);
    Err(Error::Solver(format!(
        "LOBPCG did not converge in {} iterations (worst relative residual {worst:e}, tol {:e})",
        opts.max_iter, opts.tol
    )))
}
