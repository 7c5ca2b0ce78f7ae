use std::fmt;
use std::sync::Arc;

use crate::{Error, Point2, Result};

type Sampler = dyn Fn(Point2) -> [f64; 3] + Send + Sync;

/// Symmetric coefficient matrix `[[a11, a12], [a12, a22]]` as a function of position,
/// stored as `[a11, a12, a22]`, with ellipticity bound `Λ >= 1`.
#[derive(Clone)]
pub struct CoefficientField {
    sampler: Arc<Sampler>,
    lambda: f64,
    cross: bool,
}

impl fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientField")
            .field("lambda", &self.lambda)
            .field("cross", &self.cross)
            .finish_non_exhaustive()
    }
}

impl CoefficientField {
    /// Variable coefficients; ellipticity is checked whenever a sample is taken.
    pub fn new(f: impl Fn(Point2) -> [f64; 3] + Send + Sync + 'static, lambda: f64) -> Self {
        Self {
            sampler: Arc::new(f),
            lambda,
            cross: true,
        }
    }

    pub fn identity() -> Self {
        Self::constant(1.0, 0.0, 1.0, 1.0).expect("identity is elliptic")
    }

    pub fn constant(a11: f64, a12: f64, a22: f64, lambda: f64) -> Result<Self> {
        let c = Self {
            sampler: Arc::new(move |_| [a11, a12, a22]),
            lambda,
            cross: a12 != 0.0,
        };
        c.checked(Point2::ORIGIN)?;
        Ok(c)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub(crate) fn has_cross_terms(&self) -> bool {
        self.cross
    }

    pub fn sample(&self, p: Point2) -> [f64; 3] {
        (self.sampler)(p)
    }

    /// Samples at `p` and verifies `Λ⁻¹ <= eig(a) <= Λ`.
    pub fn checked(&self, p: Point2) -> Result<[f64; 3]> {
        let m = self.sample(p);
        let [a11, a12, a22] = m;
        let tr = 0.5 * (a11 + a22);
        let disc = (0.25 * (a11 - a22).powi(2) + a12 * a12).sqrt();
        let (lo, hi) = (tr - disc, tr + disc);
        let tol = 1e-12 * self.lambda;
        if !(self.lambda >= 1.0) || !(lo >= 1.0 / self.lambda - tol) || !(hi <= self.lambda + tol) {
            return Err(Error::InvalidCoefficients(format!(
                "eigenvalues [{lo}, {hi}] at ({}, {}) outside [1/{}, {}]",
                p.x, p.y, self.lambda, self.lambda
            )));
        }
        Ok(m)
    }
}
