//! Smallest Dirichlet eigenpairs of assembled operators.

mod cholesky;
mod lobpcg;
mod precond;

use std::sync::Arc;

pub use cholesky::{lattice_nested_dissection, SparseCholesky};
pub use precond::{pcg, IncompleteCholesky};

use crate::discretize::{assemble_laplacian, rasterize, Grid, GridField, SparseOperator};
use crate::geometry::Domain;
use crate::{Error, Result};
use lobpcg::{lobpcg, LobpcgOptions};

/// Solver settings for [`smallest_eigenpairs_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative residual target `‖Aφ − λφ‖ <= tol λ ‖φ‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block vectors carried beyond the `k` requested.
    pub guard: usize,
    pub preconditioner: Preconditioner,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
            guard: 4,
            preconditioner: Preconditioner::Exact,
            seed: 0x5eed,
        }
    }
}

/// Preconditioner used inside the block eigensolver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preconditioner {
    /// Sparse Cholesky factor of the operator (nested-dissection ordering), i.e. exact inverse iteration.
    Exact,
    /// Modified incomplete Cholesky with the given diagonal compensation `omega`.
    Incomplete { omega: f64 },
}

enum Factor {
    Exact(SparseCholesky),
    Incomplete(IncompleteCholesky),
}

impl Factor {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Factor::Exact(f) => f.solve(r, z),
            Factor::Incomplete(f) => f.solve(r, z),
        }
    }
}

/// The `k` smallest eigenpairs on a grid, with `h² Σ φ_j² = 1`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Arc<Grid>,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<GridField>,
    residuals: Vec<f64>,
    iterations: usize,
    warnings: Vec<String>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<Grid> {
        Arc::clone(&self.grid)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `λ_j` with 1-based `j`.
    pub fn lambda(&self, j: usize) -> f64 {
        self.eigenvalues[j - 1]
    }

    /// `φ_j` with 1-based `j`.
    pub fn phi(&self, j: usize) -> &GridField {
        &self.eigenfunctions[j - 1]
    }

    pub fn eigenfunctions(&self) -> &[GridField] {
        &self.eigenfunctions
    }

    /// Relative residuals `‖Aφ_j − λ_jφ_j‖ / (λ_j ‖φ_j‖)`.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

pub fn smallest_eigenpairs(a: &SparseOperator, g: &Grid, k: usize, tol: f64) -> Result<Spectrum> {
    smallest_eigenpairs_with(
        a,
        Arc::new(g.clone()),
        k,
        SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

/// Index of the largest `|v|`, ties within `1e-12` of the maximum going to the smallest index.
pub fn argmax_abs(v: &[f64]) -> usize {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v.iter()
        .position(|x| x.abs() >= m - 1e-12 * m.max(f64::MIN_POSITIVE))
        .unwrap_or(0)
}

pub fn smallest_eigenpairs_with(
    a: &SparseOperator,
    grid: Arc<Grid>,
    k: usize,
    opts: SolverOptions,
) -> Result<Spectrum> {
    let n = a.dim();
    if n != grid.len() {
        return Err(Error::GridMismatch(format!(
            "operator dimension {n} vs {} grid nodes",
            grid.len()
        )));
    }
    if k == 0 || 4 * k > n {
        return Err(Error::Precondition(format!(
            "need 1 <= k <= dimension/4, got k = {k} for dimension {n}"
        )));
    }
    let factor = match opts.preconditioner {
        Preconditioner::Exact => {
            let coords: Vec<(i64, i64)> = (0..n).map(|i| grid.lattice(i)).collect();
            Factor::Exact(SparseCholesky::new(a, Some(lattice_nested_dissection(&coords)))?)
        }
        Preconditioner::Incomplete { omega } => Factor::Incomplete(IncompleteCholesky::new(a, omega)),
    };
    let apply = |r: &[f64], z: &mut [f64]| factor.apply(r, z);
    let raw = lobpcg(
        a,
        &apply,
        k,
        LobpcgOptions {
            tol: opts.tol,
            max_iter: opts.max_iter,
            guard: opts.guard,
            seed: opts.seed,
        },
    )?;
    let mut values = raw.values;
    let mut vectors = raw.vectors;
    let mut residuals = raw.residuals;
    let mut warnings = Vec::new();

    // sign conventions
    for (j, v) in vectors.iter_mut().enumerate() {
        let flip = if j == 0 {
            v.iter().sum::<f64>() < 0.0
        } else {
            v.iter().find(|x| x.abs() > 1e-12).is_some_and(|x| *x < 0.0)
        };
        if flip {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    // inverse-iteration polish when rounding leaves a non-positive ground state entry
    let mut polish = 0;
    while polish < 3 && vectors[0].iter().any(|&x| x <= 0.0) {
        let mut y = vec![0.0; n];
        match &factor {
            Factor::Exact(f) => f.solve(&vectors[0], &mut y),
            Factor::Incomplete(f) => {
                if pcg(a, f, &vectors[0], &mut y, 1e-14, 20 * n).is_none() {
                    break;
                }
            }
        }
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= ny);
        values[0] = a.quadratic_form(&y);
        let mut r = a.mul(&y);
        for i in 0..n {
            r[i] -= values[0] * y[i];
        }
        residuals[0] = r.iter().map(|v| v * v).sum::<f64>().sqrt() / values[0];
        vectors[0] = y;
        polish += 1;
    }
    if vectors[0].iter().any(|&x| x <= 0.0) {
        warnings.push("ground state has non-positive entries".to_string());
        log::warn!("ground state has non-positive entries");
    }
    if k > 1 && values[1] - values[0] < 1e-8 * values[0] {
        warnings.push(format!(
            "lambda_1 appears degenerate: gap {:e}",
            values[1] - values[0]
        ));
        log::warn!("lambda_1 appears degenerate");
    }

    let h = grid.h();
    let eigenfunctions = vectors
        .into_iter()
        .map(|v| {
            let s = 1.0 / h;
            GridField::new(&grid, v.into_iter().map(|x| x * s).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        grid,
        eigenvalues: values,
        eigenfunctions,
        residuals,
        iterations: raw.iterations,
        warnings,
    })
}

/// Rasterises, assembles the Laplacian and solves in one step.
pub fn dirichlet_spectrum(d: &Domain, h: f64, k: usize, opts: SolverOptions) -> Result<Spectrum> {
    let g = rasterize(d, h)?;
    let a = assemble_laplacian(&g);
    smallest_eigenpairs_with(&a, Arc::new(g), k, opts)
}

/// `fᵀ A f / fᵀ f`.
pub fn rayleigh_quotient(g: &Grid, a: &SparseOperator, f: &GridField) -> Result<f64> {
    if f.key() != g.key() || a.dim() != g.len() {
        return Err(Error::GridMismatch("field, operator and grid disagree".into()));
    }
    let ff: f64 = f.values().iter().map(|v| v * v).sum();
    if ff == 0.0 {
        return Err(Error::Precondition("Rayleigh quotient of the zero field".into()));
    }
    Ok(a.quadratic_form(f.values()) / ff)
}

/// Per-index comparison `λ_j(U) >= λ_j(V)` for `U ⊆ V`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    /// `(j, λ_j(U), λ_j(V), holds)`.
    pub rows: Vec<(usize, f64, f64, bool)>,
    pub holds: bool,
}

pub fn eigen_monotonicity_check(inner: &Spectrum, outer: &Spectrum, rel_tol: f64) -> MonotonicityReport {
    let k = inner.len().min(outer.len());
    let rows: Vec<_> = (1..=k)
        .map(|j| {
            let (u, v) = (inner.lambda(j), outer.lambda(j));
            (j, u, v, u >= v * (1.0 - rel_tol))
        })
        .collect();
    let holds = rows.iter().all(|r| r.3);
    MonotonicityReport { rows, holds }
}

/// Eigenpairs of `-u''` on `(0, a)` with a uniform grid of `a/h - 1` interior nodes.
#[derive(Debug, Clone)]
pub struct IntervalSpectrum {
    pub a: f64,
    pub h: f64,
    /// Interior node positions `x_i = i h`.
    pub nodes: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// Normalised so that `h Σ φ² = 1`; `φ_1 > 0`.
    pub eigenfunctions: Vec<Vec<f64>>,
}

pub fn interval_eigenpairs(a: f64, h: f64, k: usize, tol: f64) -> Result<IntervalSpectrum> {
    let steps = (a / h).round();
    if !(h > 0.0) || (steps * h - a).abs() > 1e-9 * a || steps < 2.0 {
        return Err(Error::Resolution(format!("h = {h} must divide a = {a}")));
    }
    let n = steps as usize - 1;
    if k == 0 || 4 * k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= {}/4", n)));
    }
    let inv = 1.0 / (h * h);
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![(i, 2.0 * inv)];
            if i > 0 {
                r.push((i - 1, -inv));
            }
            if i + 1 < n {
                r.push((i + 1, -inv));
            }
            r
        })
        .collect();
    let op = SparseOperator::from_rows(rows, true);
    // tridiagonal: the natural ordering has no fill
    let chol = SparseCholesky::new(&op, None)?;
    let apply = |r: &[f64], z: &mut [f64]| chol.solve(r, z);
    let raw = lobpcg(
        &op,
        &apply,
        k,
        LobpcgOptions {
            tol,
            max_iter: 500,
            guard: 2,
            seed: SolverOptions::default().seed,
        },
    )?;
    let scale = 1.0 / h.sqrt();
    let eigenfunctions = raw
        .vectors
        .into_iter()
        .enumerate()
        .map(|(j, mut v)| {
            let flip = if j == 0 {
                v.iter().sum::<f64>() < 0.0
            } else {
                v.iter().find(|x| x.abs() > 1e-12).is_some_and(|x| *x < 0.0)
            };
            let s = if flip { -scale } else { scale };
            v.iter_mut().for_each(|x| *x *= s);
            v
        })
        .collect();
    Ok(IntervalSpectrum {
        a,
        h,
        nodes: (1..=n).map(|i| i as f64 * h).collect(),
        eigenvalues: raw.values,
        eigenfunctions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rectangle;
    use crate::Point2;
    use std::f64::consts::PI;

    fn unit_square() -> Domain {
        rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into()
    }

    #[test]
    fn square_matches_discrete_analytic() {
        let h = 1.0 / 64.0;
        let s = dirichlet_spectrum(&unit_square(), h, 3, SolverOptions::default()).unwrap();
        let exact = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((s.lambda(1) - exact).abs() < 1e-10 * exact, "{} vs {exact}", s.lambda(1));
        let g = s.grid();
        let norm: f64 = s.phi(1).values().iter().map(|v| v * v).sum::<f64>() * h * h;
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(s.phi(1).values().iter().all(|&v| v > 0.0));
        let dot: f64 = s.phi(1).values().iter().zip(s.phi(2).values()).map(|(a, b)| a * b).sum::<f64>() * h * h;
        assert!(dot.abs() < 1e-8);
        let a = assemble_laplacian(g);
        let rq = rayleigh_quotient(g, &a, s.phi(1)).unwrap();
        assert!((rq - s.lambda(1)).abs() < 1e-8 * s.lambda(1));
    }

    #[test]
    fn interval_reduction() {
        let s = interval_eigenpairs(1.0, 1.0 / 512.0, 2, 1e-10).unwrap();
        assert!((s.eigenvalues[0] / (PI * PI) - 1.0).abs() < 5e-4);
        let norm: f64 = s.eigenfunctions[0].iter().map(|v| v * v).sum::<f64>() * s.h;
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k_bound_is_enforced() {
        let g = rasterize(&unit_square(), 0.25).unwrap();
        let a = assemble_laplacian(&g);
        assert!(smallest_eigenpairs(&a, &g, 3, 1e-8).is_err());
    }
}
