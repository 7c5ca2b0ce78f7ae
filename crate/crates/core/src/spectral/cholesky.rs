use crate::discretize::SparseOperator;
use crate::{Error, Result};

/// Sparse Cholesky factor `P A Pᵀ = L Lᵀ` computed with an up-looking algorithm.
#[derive(Debug, Clone)]
pub struct SparseCholesky {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
}

const NONE: usize = usize::MAX;

/// Nested-dissection ordering from lattice coordinates: each block is split along
/// a full lattice line, the line itself is numbered last.
pub fn lattice_nested_dissection(coords: &[(i64, i64)]) -> Vec<usize> {
    let mut order = Vec::with_capacity(coords.len());
    let mut idx: Vec<usize> = (0..coords.len()).collect();
    dissect(coords, &mut idx, &mut order);
    order
}

fn dissect(coords: &[(i64, i64)], idx: &mut [usize], order: &mut Vec<usize>) {
    if idx.len() <= 64 {
        idx.sort_unstable_by_key(|&k| (coords[k].1, coords[k].0));
        order.extend_from_slice(idx);
        return;
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &k in idx.iter() {
        let (x, y) = coords[k];
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let along_x = xmax - xmin >= ymax - ymin;
    let key = |k: usize| if along_x { coords[k].0 } else { coords[k].1 };
    let mut keys: Vec<i64> = idx.iter().map(|&k| key(k)).collect();
    let mid = keys.len() / 2;
    let (_, &mut cut, _) = keys.select_nth_unstable(mid);
    let mut left: Vec<usize> = Vec::new();
    let mut right: Vec<usize> = Vec::new();
    let mut sep: Vec<usize> = Vec::new();
    for &k in idx.iter() {
        match key(k).cmp(&cut) {
            std::cmp::Ordering::Less => left.push(k),
            std::cmp::Ordering::Greater => right.push(k),
            std::cmp::Ordering::Equal => sep.push(k),
        }
    }
    if left.is_empty() || right.is_empty() {
        idx.sort_unstable_by_key(|&k| (coords[k].1, coords[k].0));
        order.extend_from_slice(idx);
        return;
    }
    dissect(coords, &mut left, order);
    dissect(coords, &mut right, order);
    sep.sort_unstable_by_key(|&k| (coords[k].1, coords[k].0));
    order.extend_from_slice(&sep);
}

impl SparseCholesky {
    /// Factorises `a` (symmetric positive definite) under the ordering `perm[new] = old`.
    pub fn new(a: &SparseOperator, perm: Option<Vec<usize>>) -> Result<Self> {
        let n = a.dim();
        let perm = perm.unwrap_or_else(|| (0..n).collect());
        if perm.len() != n {
            return Err(Error::Internal("permutation length mismatch".into()));
        }
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        // upper triangle of the permuted matrix, by column: entries (i, v) with i <= k
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for old_r in 0..n {
            let (cs, vs) = a.row(old_r);
            let r = inv[old_r];
            for (&old_c, &v) in cs.iter().zip(vs) {
                let c = inv[old_c];
                if r <= c {
                    cols[c].push((r, v));
                }
            }
        }
        for c in &mut cols {
            c.sort_unstable_by_key(|e| e.0);
        }

        // elimination tree
        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for (k, col) in cols.iter().enumerate() {
            for &(i0, _) in col {
                let mut i = i0;
                while i != NONE && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == NONE {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        // column counts via row patterns
        let mut mark = vec![NONE; n];
        let mut stack = Vec::with_capacity(n);
        let mut counts = vec![1usize; n];
        for (k, col) in cols.iter().enumerate() {
            ereach(col, k, &parent, &mut mark, &mut stack);
            for &j in &stack {
                counts[j] += 1;
            }
        }
        let mut lp = vec![0usize; n + 1];
        for j in 0..n {
            lp[j + 1] = lp[j] + counts[j];
        }
        let nnz = lp[n];
        let mut li = vec![0usize; nnz];
        let mut lx = vec![0.0; nnz];
        let mut next: Vec<usize> = lp[..n].to_vec();
        let mut x = vec![0.0; n];
        mark.iter_mut().for_each(|m| *m = NONE);

        for k in 0..n {
            ereach(&cols[k], k, &parent, &mut mark, &mut stack);
            let mut d = 0.0;
            for &(i, v) in &cols[k] {
                if i == k {
                    d += v;
                } else {
                    x[i] += v;
                }
            }
            // stack holds the pattern in topological order
            for &i in stack.iter() {
                let lki = x[i] / lx[lp[i]];
                x[i] = 0.0;
                for p in lp[i] + 1..next[i] {
                    x[li[p]] -= lx[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                li[p] = k;
                lx[p] = lki;
            }
            if !(d > 0.0) {
                return Err(Error::Singular(format!(
                    "matrix is not positive definite (pivot {k} = {d:e})"
                )));
            }
            let p = next[k];
            next[k] += 1;
            li[p] = k;
            lx[p] = d.sqrt();
        }
        Ok(Self { n, perm, lp, li, lx })
    }

    pub fn nnz(&self) -> usize {
        self.lx.len()
    }

    /// `x = A⁻¹ b`.
    pub fn solve(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for j in 0..n {
            let yj = y[j] / self.lx[self.lp[j]];
            y[j] = yj;
            for p in self.lp[j] + 1..self.lp[j + 1] {
                y[self.li[p]] -= self.lx[p] * yj;
            }
        }
        for j in (0..n).rev() {
            let mut s = y[j];
            for p in self.lp[j] + 1..self.lp[j + 1] {
                s -= self.lx[p] * y[self.li[p]];
            }
            y[j] = s / self.lx[self.lp[j]];
        }
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
    }
}

/// Pattern of row `k` of `L` (excluding the diagonal), left in `stack` in topological order.
fn ereach(col: &[(usize, f64)], k: usize, parent: &[usize], mark: &mut [usize], stack: &mut Vec<usize>) {
    stack.clear();
    mark[k] = k;
    let mut path = Vec::new();
    for &(i0, _) in col {
        if i0 >= k {
            continue;
        }
        let mut i = i0;
        path.clear();
        while mark[i] != k {
            path.push(i);
            mark[i] = k;
            i = parent[i];
            if i == NONE {
                break;
            }
        }
        // nodes nearer the root must come later
        stack.extend(path.drain(..).rev());
    }
    // stack currently holds reversed paths in reverse order; fix to a valid topological order
    let mut out: Vec<usize> = Vec::with_capacity(stack.len());
    std::mem::swap(&mut out, stack);
    stack.extend(out.into_iter().rev());
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(m: usize) -> (SparseOperator, Vec<(i64, i64)>) {
        let id = |i: usize, j: usize| j * m + i;
        let mut rows = Vec::new();
        let mut coords = Vec::new();
        for j in 0..m {
            for i in 0..m {
                coords.push((i as i64, j as i64));
                let mut r = vec![(id(i, j), 4.0)];
                if i > 0 {
                    r.push((id(i - 1, j), -1.0));
                }
                if i + 1 < m {
                    r.push((id(i + 1, j), -1.0));
                }
                if j > 0 {
                    r.push((id(i, j - 1), -1.0));
                }
                if j + 1 < m {
                    r.push((id(i, j + 1), -1.0));
                }
                rows.push(r);
            }
        }
        (SparseOperator::from_rows(rows, true), coords)
    }

    #[test]
    fn solves_with_and_without_ordering() {
        let (a, coords) = laplacian(40);
        let b: Vec<f64> = (0..1600).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        for perm in [None, Some(lattice_nested_dissection(&coords))] {
            let f = SparseCholesky::new(&a, perm).unwrap();
            let mut x = vec![0.0; 1600];
            f.solve(&b, &mut x);
            let r = a.mul(&x);
            for i in 0..1600 {
                assert!((r[i] - b[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn nested_dissection_reduces_fill() {
        let (a, coords) = laplacian(64);
        let natural = SparseCholesky::new(&a, None).unwrap().nnz();
        let nd = SparseCholesky::new(&a, Some(lattice_nested_dissection(&coords))).unwrap().nnz();
        assert!(nd < natural, "{nd} vs {natural}");
    }

    #[test]
    fn rejects_indefinite() {
        let a = SparseOperator::from_rows(vec![vec![(0, 1.0), (1, 2.0)], vec![(0, 2.0), (1, 1.0)]], true);
        assert!(SparseCholesky::new(&a, None).is_err());
    }
}
