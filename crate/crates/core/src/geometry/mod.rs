//! Planar domains and the geometric queries the solvers and checks rely on.

mod build;
mod ellipse;
mod measures;
mod point;
mod polygon;
mod rounded;

use std::sync::OnceLock;

pub use build::{
    build_perturbed_triangle, build_regular_polygon, build_sawtooth_side, build_triangle,
    random_convex_polygon, random_triangle, rectangle, DilationFamily, PerturbedTriangle,
};
pub use ellipse::EllipseDomain;
pub use measures::{
    convex_tube_bound_check, eccentricity, exterior_ball_alpha, tube_ratio, AlphaReport,
    Eccentricity, TubeBoundRow, TubeRatio,
};
pub use point::{Point2, Segment};
pub use polygon::{PolygonDomain, SideMetric};
pub use rounded::{RoundedDomain, RoundingMode};

use crate::{Error, Result};

/// The concrete shape behind a [`Domain`].
#[derive(Debug, Clone)]
pub enum Shape {
    Polygon(PolygonDomain),
    Ellipse(EllipseDomain),
    Rounded(RoundedDomain),
}

/// User-supplied inner-uniformity constants `(C0, c0)`; carried as labels only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerUniformity {
    pub big_c0: f64,
    pub c0: f64,
}

/// Value of the inner diameter and the boundary sampling spacing used (`None` when exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerDiameter {
    pub value: f64,
    pub spacing: Option<f64>,
}

/// A bounded, connected planar domain.
#[derive(Debug, Clone)]
pub struct Domain {
    shape: Shape,
    inner_uniformity: Option<InnerUniformity>,
    diam: OnceLock<InnerDiameter>,
}

impl From<PolygonDomain> for Domain {
    fn from(p: PolygonDomain) -> Self {
        Self::new(Shape::Polygon(p))
    }
}

impl From<EllipseDomain> for Domain {
    fn from(e: EllipseDomain) -> Self {
        Self::new(Shape::Ellipse(e))
    }
}

impl From<RoundedDomain> for Domain {
    fn from(r: RoundedDomain) -> Self {
        Self::new(Shape::Rounded(r))
    }
}

impl Domain {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            inner_uniformity: None,
            diam: OnceLock::new(),
        }
    }

    pub fn with_inner_uniformity(mut self, big_c0: f64, c0: f64) -> Self {
        self.inner_uniformity = Some(InnerUniformity { big_c0, c0 });
        self
    }

    pub fn inner_uniformity(&self) -> Option<InnerUniformity> {
        self.inner_uniformity
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn as_polygon(&self) -> Option<&PolygonDomain> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        match &self.shape {
            Shape::Polygon(p) => p.is_convex(),
            Shape::Ellipse(_) | Shape::Rounded(_) => true,
        }
    }

    /// Open-interior membership; boundary and slit points are exterior.
    pub fn contains(&self, p: Point2) -> bool {
        match &self.shape {
            Shape::Polygon(s) => s.contains(p),
            Shape::Ellipse(s) => s.contains(p),
            Shape::Rounded(s) => s.contains(p),
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn dist_boundary(&self, p: Point2) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::Precondition(format!(
                "({}, {}) is not an interior point",
                p.x, p.y
            )));
        }
        Ok(self.dist_to_boundary(p))
    }

    /// Unsigned distance to the boundary for any point.
    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        match &self.shape {
            Shape::Polygon(s) => s.dist_to_boundary(p),
            Shape::Ellipse(s) => s.dist_to_boundary(p),
            Shape::Rounded(s) => s.dist_to_boundary(p),
        }
    }

    /// First boundary crossing of the ray `p + t * dir` (unit `dir`) with `0 < t <= t_max`.
    pub fn ray_exit(&self, p: Point2, dir: Point2, t_max: f64) -> Option<f64> {
        match &self.shape {
            Shape::Polygon(s) => s.ray_exit(p, dir, t_max),
            Shape::Ellipse(s) => s.ray_exit(p, dir, t_max),
            Shape::Rounded(s) => s.ray_exit(p, dir, t_max),
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Polygon(s) => s.area(),
            Shape::Ellipse(s) => s.area(),
            Shape::Rounded(s) => s.area(),
        }
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        match &self.shape {
            Shape::Polygon(s) => s.bounding_box(),
            Shape::Ellipse(s) => s.bounding_box(),
            Shape::Rounded(s) => s.bounding_box(),
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Polygon(s) => max_pair_distance(s.vertices()),
            Shape::Ellipse(s) => 2.0 * s.a,
            Shape::Rounded(s) => s.diameter(),
        }
    }

    /// Supremum of the geodesic distance between points of the domain.
    pub fn inner_diameter(&self) -> f64 {
        self.inner_diameter_report().value
    }

    pub fn inner_diameter_report(&self) -> InnerDiameter {
        *self.diam.get_or_init(|| match &self.shape {
            Shape::Polygon(p) if !p.is_convex() => measures::sampled_inner_diameter(p),
            _ => InnerDiameter {
                value: self.diameter(),
                spacing: None,
            },
        })
    }

    /// Shortest-path distance inside the domain between two interior points.
    pub fn geodesic_dist(&self, p: Point2, q: Point2) -> Result<f64> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::Precondition("geodesic endpoints must be interior".into()));
        }
        match &self.shape {
            Shape::Polygon(s) => s.geodesic_dist(p, q),
            _ => Ok(p.dist(q)),
        }
    }

    /// Homothety by `c >= 1` about a point of the closed domain.
    pub fn dilate(&self, c: f64, center: Point2) -> Result<Domain> {
        if !(c >= 1.0) || !c.is_finite() {
            return Err(Error::Precondition(format!("dilation factor must be >= 1, got {c}")));
        }
        if !self.contains(center) && self.dist_to_boundary(center) > 1e-12 * self.diameter() {
            return Err(Error::Precondition("dilation center must lie in the closed domain".into()));
        }
        self.scale_about(c, center)
    }

    /// Homothety by any positive factor, without the containment precondition.
    pub fn scale_about(&self, c: f64, center: Point2) -> Result<Domain> {
        if !(c > 0.0) {
            return Err(Error::Precondition(format!("scale factor must be positive, got {c}")));
        }
        let shape = match &self.shape {
            Shape::Polygon(s) => Shape::Polygon(s.dilate(c, center)?),
            Shape::Ellipse(s) => Shape::Ellipse(s.dilate(c, center)?),
            Shape::Rounded(s) => Shape::Rounded(s.dilate(c, center)?),
        };
        let mut out = Domain::new(shape);
        out.inner_uniformity = self.inner_uniformity;
        Ok(out)
    }

    /// A point well inside the domain, used as a default dilation center.
    pub fn interior_reference_point(&self) -> Point2 {
        match &self.shape {
            Shape::Ellipse(e) => e.center,
            Shape::Rounded(r) => {
                let c = r.core();
                c.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) * (1.0 / c.len() as f64)
            }
            Shape::Polygon(p) => {
                let c = p.centroid();
                if p.contains(c) {
                    c
                } else {
                    // fall back to the deepest vertex-adjacent interior sample
                    let mut best = (p.vertices()[0], -1.0);
                    let (lo, hi) = p.bounding_box();
                    let m = 64;
                    for j in 1..m {
                        for i in 1..m {
                            let q = Point2::new(
                                lo.x + (hi.x - lo.x) * i as f64 / m as f64,
                                lo.y + (hi.y - lo.y) * j as f64 / m as f64,
                            );
                            if p.contains(q) {
                                let d = p.dist_to_boundary(q);
                                if d > best.1 {
                                    best = (q, d);
                                }
                            }
                        }
                    }
                    best.0
                }
            }
        }
    }
}

fn max_pair_distance(v: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in v.iter().enumerate() {
        for q in &v[i + 1..] {
            d = d.max(p.dist(*q));
        }
    }
    d
}
