use crate::discretize::SparseOperator;

/// Modified incomplete Cholesky factorisation `A ≈ L D Lᵀ` on the sparsity pattern of `A`.
///
/// Fill-in that falls outside the pattern is dropped and `omega` times its value
/// is moved to the diagonal (`omega = 0` is plain IC(0), `omega = 1` preserves row sums).
#[derive(Debug, Clone)]
pub struct IncompleteCholesky {
    /// strictly lower part of `L`, stored by column: entries `(p, L_pj)` with `p > j`
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
    diag: Vec<f64>,
}

impl IncompleteCholesky {
    pub fn new(a: &SparseOperator, omega: f64) -> Self {
        let n = a.dim();
        let mut ptr = Vec::with_capacity(n + 1);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        let mut d = Vec::with_capacity(n);
        ptr.push(0);
        for j in 0..n {
            let (cols, vals) = a.row(j);
            for (&c, &v) in cols.iter().zip(vals) {
                if c > j {
                    idx.push(c);
                    val.push(v);
                }
            }
            ptr.push(idx.len());
            d.push(a.get(j, j));
        }
        let orig = d.clone();
        for j in 0..n {
            if !(d[j] > 1e-8 * orig[j]) {
                d[j] = orig[j];
            }
            let dj = d[j];
            let (s, e) = (ptr[j], ptr[j + 1]);
            // entries hold u_p = L_pj * D_j before scaling
            for a_ in s..e {
                let p = idx[a_];
                let up = val[a_];
                let lp = up / dj;
                d[p] -= lp * up;
                for b_ in a_ + 1..e {
                    let q = idx[b_];
                    let upd = lp * val[b_];
                    let (ps, pe) = (ptr[p], ptr[p + 1]);
                    match idx[ps..pe].binary_search(&q) {
                        Ok(pos) => val[ps + pos] -= upd,
                        Err(_) => {
                            d[p] -= omega * upd;
                            d[q] -= omega * upd;
                        }
                    }
                }
            }
            for v in &mut val[s..e] {
                *v /= dj;
            }
        }
        Self { ptr, idx, val, diag: d }
    }

    /// `z = (L D Lᵀ)⁻¹ r`.
    pub fn solve(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        let n = self.diag.len();
        for j in 0..n {
            let zj = z[j];
            for a in self.ptr[j]..self.ptr[j + 1] {
                z[self.idx[a]] -= self.val[a] * zj;
            }
        }
        for (zj, d) in z.iter_mut().zip(&self.diag) {
            *zj /= d;
        }
        for j in (0..n).rev() {
            let mut s = z[j];
            for a in self.ptr[j]..self.ptr[j + 1] {
                s -= self.val[a] * z[self.idx[a]];
            }
            z[j] = s;
        }
    }
}

/// Preconditioned conjugate gradients for `A x = b`; returns the iteration count or `None`.
pub fn pcg(
    a: &SparseOperator,
    m: &IncompleteCholesky,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Option<usize> {
    let n = b.len();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Some(0);
    }
    let mut r = b.to_vec();
    let ax = a.mul(x);
    for i in 0..n {
        r[i] -= ax[i];
    }
    let mut z = vec![0.0; n];
    m.solve(&r, &mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rn <= rel_tol * bnorm {
            return Some(it);
        }
        a.apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        m.solve(&r, &mut z);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    None
}
