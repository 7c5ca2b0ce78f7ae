//! Lattice rasterisation of domains and sparse Dirichlet operators on the result.

mod coefficients;
mod grid;
mod sparse;

pub use coefficients::CoefficientField;
pub use grid::{rasterize, Grid, GridField, GridKey, DIRECTIONS};
pub use sparse::SparseOperator;

use crate::{Error, Result};

/// Symmetric Shortley–Weller Laplacian in variational form.
///
/// Row `k` is `(1/h²) (Σ_d h/γ_d u_k − Σ_links u_j)` where `γ_d` is the gap to the
/// boundary (or `h`) in each lattice direction. Regular rows reduce to the
/// classical five-point stencil.
pub fn assemble_laplacian(g: &Grid) -> SparseOperator {
    let h = g.h();
    let inv = 1.0 / (h * h);
    let mut rows = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let gaps = g.gaps(k);
        let links = g.links(k);
        let mut diag = 0.0;
        let mut row = Vec::with_capacity(5);
        for d in 0..4 {
            diag += h / gaps[d];
            if let Some(j) = links[d] {
                row.push((j, -inv));
            }
        }
        row.push((k, diag * inv));
        rows.push(row);
    }
    SparseOperator::from_rows(rows, true)
}

/// Plain masked five-point Laplacian: `4/h²` on the diagonal, `-1/h²` per interior link.
pub fn assemble_masked_laplacian(g: &Grid) -> SparseOperator {
    let h = g.h();
    let inv = 1.0 / (h * h);
    let rows = (0..g.len())
        .map(|k| {
            let mut row: Vec<(usize, f64)> =
                g.links(k).iter().flatten().map(|&j| (j, -inv)).collect();
            row.push((k, 4.0 * inv));
            row
        })
        .collect();
    SparseOperator::from_rows(rows, true)
}

/// Finite-volume discretisation of `-div(a ∇u)` with masked Dirichlet boundary.
///
/// `a11`, `a22` are sampled at face midpoints; the `a12` cross terms use centred
/// differences with `a12` sampled at lattice nodes, which keeps the matrix symmetric.
pub fn assemble_divergence_form(g: &Grid, a: &CoefficientField) -> Result<SparseOperator> {
    let h = g.h();
    let inv = 1.0 / (h * h);
    let mut rows = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let p = g.point(k);
        let links = g.links(k);
        let mut diag = 0.0;
        let mut row = Vec::with_capacity(9);
        for (d, (dx, dy)) in DIRECTIONS.iter().enumerate() {
            let face = p + crate::Point2::new(0.5 * h * *dx as f64, 0.5 * h * *dy as f64);
            let m = a.checked(face)?;
            let c = if *dx != 0 { m[0] } else { m[2] };
            diag += c * inv;
            if let Some(j) = links[d] {
                row.push((j, -c * inv));
            }
        }
        row.push((k, diag));
        if a.has_cross_terms() {
            let (i, j) = g.lattice(k);
            let a12 = |di: i64, dj: i64| -> Result<f64> {
                let q = g.lattice_point(i + di, j + dj);
                Ok(a.checked(q)?[1])
            };
            let q = 0.25 * inv;
            let corners = [
                ((1, 1), -(a12(1, 0)? + a12(0, 1)?) * q),
                ((-1, -1), -(a12(-1, 0)? + a12(0, -1)?) * q),
                ((1, -1), (a12(1, 0)? + a12(0, -1)?) * q),
                ((-1, 1), (a12(-1, 0)? + a12(0, 1)?) * q),
            ];
            for ((di, dj), v) in corners {
                if v == 0.0 {
                    continue;
                }
                if let Some(m) = g.diagonal_neighbor(k, di, dj) {
                    row.push((m, v));
                }
            }
        }
        rows.push(row);
    }
    Ok(SparseOperator::from_rows(rows, true))
}

/// Discrete integral `h² Σ f` over the interior nodes.
pub fn integrate(g: &Grid, f: &GridField) -> Result<f64> {
    if f.key() != g.key() {
        return Err(Error::GridMismatch("field was built on a different grid".into()));
    }
    let h2 = g.h() * g.h();
    Ok(h2 * f.values().iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Domain, EllipseDomain};
    use crate::Point2;

    fn unit_square() -> Domain {
        rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into()
    }

    #[test]
    fn regular_rows_are_five_point() {
        let g = rasterize(&unit_square(), 0.25).unwrap();
        let a = assemble_laplacian(&g);
        let centre = g.index_of(2, 2).unwrap();
        assert_eq!(a.get(centre, centre), 64.0);
        assert_eq!(a.get(centre, g.index_of(3, 2).unwrap()), -16.0);
        assert!(a.is_symmetric(0.0));
    }

    #[test]
    fn identity_coefficients_match_masked_laplacian() {
        let d: Domain = EllipseDomain::new(Point2::ORIGIN, 1.0, 0.6, 0.3).unwrap().into();
        let g = rasterize(&d, 0.05).unwrap();
        let a = assemble_divergence_form(&g, &CoefficientField::identity()).unwrap();
        let m = assemble_masked_laplacian(&g);
        assert_eq!(a, m);
        let a2 = assemble_divergence_form(&g, &CoefficientField::constant(2.0, 0.0, 2.0, 2.0).unwrap())
            .unwrap();
        assert_eq!(a2, m.scaled(2.0));
    }

    #[test]
    fn cross_terms_are_symmetric() {
        let d: Domain = EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap().into();
        let g = rasterize(&d, 0.1).unwrap();
        let a = CoefficientField::new(
            |p: Point2| [2.0 + p.x, 0.3 * p.y, 1.5],
            4.0,
        );
        let op = assemble_divergence_form(&g, &a).unwrap();
        assert!(op.is_symmetric(1e-12));
    }

    #[test]
    fn ellipticity_is_checked() {
        let d = unit_square();
        let g = rasterize(&d, 0.1).unwrap();
        let bad = CoefficientField::constant(10.0, 0.0, 1.0, 4.0).unwrap_err();
        assert!(matches!(bad, Error::InvalidCoefficients(_)));
        let lazy = CoefficientField::new(|_| [1.0, 0.0, 0.01], 4.0);
        assert!(assemble_divergence_form(&g, &lazy).is_err());
    }

    #[test]
    fn integrate_counts_nodes() {
        let g = rasterize(&unit_square(), 0.25).unwrap();
        let one = GridField::constant(&g, 1.0);
        assert!((integrate(&g, &one).unwrap() - 0.5625).abs() < 1e-15);
        let other = rasterize(&unit_square(), 0.2).unwrap();
        assert!(integrate(&other, &one).is_err());
    }
}
