//! Shared fixtures for the criterion benchmarks.

use drumhead::discretize::{assemble_laplacian, rasterize};
use drumhead::geometry::{build_sawtooth_side, rectangle, EllipseDomain};
use drumhead::{Domain, Grid, Point2, SparseOperator};

pub fn unit_square() -> Domain {
    rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into()
}

pub fn unit_disk() -> Domain {
    EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap().into()
}

/// Unit square with eight teeth of height 0.02 on its bottom side.
pub fn sawtooth_square() -> Domain {
    let sq = rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap();
    build_sawtooth_side(&sq, 0, 8, 0.02).unwrap().into()
}

/// Grid and Dirichlet Laplacian of `d` at spacing `h`.
pub fn laplacian(d: &Domain, h: f64) -> (Grid, SparseOperator) {
    let g = rasterize(d, h).unwrap();
    let a = assemble_laplacian(&g);
    (g, a)
}
