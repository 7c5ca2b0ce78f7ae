//! Principal Dirichlet eigenfunctions of bounded planar domains.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] – exact domain descriptions (polygons with slits, ellipses,
//!   rounded shapes) and the queries every other layer needs.
//! * [`discretize`] – lattice rasterisation and sparse Dirichlet operators.
//! * [`spectral`] – the smallest eigenpairs of those operators.
//! * [`caricature`] – closed-form profiles that are comparable to the
//!   principal eigenfunction.
//! * [`analysis`] – ratio statistics and the comparison checks built on them.
//! * [`heatkernel`] – spectral heat kernels, envelope fits and disk Green
//!   functions.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod caricature;
pub mod discretize;
mod error;
pub mod geometry;
pub mod heatkernel;
pub mod spectral;

pub use discretize::{Grid, GridField, SparseOperator};
pub use error::{Error, Result};
pub use geometry::{Domain, Point2, PolygonDomain};
pub use spectral::Spectrum;
