use std::f64::consts::PI;

use super::point::{Point2, Segment};
use super::polygon::PolygonDomain;
use crate::{Error, Result};

/// How the rounded domain is built from its convex base polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    /// Vertices are first pulled inward by `epsilon` along their angle bisectors,
    /// then the shrunken polygon is thickened by `epsilon`; every corner becomes
    /// a circular arc of radius `epsilon`.
    CornerQuarterCircles,
    /// The set of points within `epsilon` of the base polygon.
    EpsilonNeighborhood,
}

/// The `epsilon`-neighbourhood of a convex core polygon.
///
/// The core may collapse to a segment or a single point (e.g. a square whose
/// corner radius reaches half its diagonal becomes a disk).
#[derive(Debug, Clone)]
pub struct RoundedDomain {
    base: PolygonDomain,
    mode: RoundingMode,
    epsilon: f64,
    core: Vec<Point2>,
}

impl RoundedDomain {
    pub fn new(base: PolygonDomain, mode: RoundingMode, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
        }
        if !base.is_convex() {
            return Err(Error::Precondition("rounded domains need a convex base".into()));
        }
        let core = match mode {
            RoundingMode::EpsilonNeighborhood => base.vertices().to_vec(),
            RoundingMode::CornerQuarterCircles => shrink_along_bisectors(&base, epsilon)?,
        };
        Ok(Self { base, mode, epsilon, core })
    }

    pub fn base(&self) -> &PolygonDomain {
        &self.base
    }

    pub fn mode(&self) -> RoundingMode {
        self.mode
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Vertices of the convex core (one or two points if it has collapsed).
    pub fn core(&self) -> &[Point2] {
        &self.core
    }

    fn core_edges(&self) -> Vec<Segment> {
        let n = self.core.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| Segment::new(self.core[i], self.core[(i + 1) % n]))
            .collect()
    }

    fn core_contains(&self, p: Point2) -> bool {
        let n = self.core.len();
        n >= 3
            && (0..n).all(|i| {
                let (a, b) = (self.core[i], self.core[(i + 1) % n]);
                (b - a).cross(p - a) >= 0.0
            })
    }

    /// Distance to the core boundary and the closest point on it.
    fn core_boundary_nearest(&self, p: Point2) -> (f64, Point2) {
        if self.core.len() == 1 {
            return (p.dist(self.core[0]), self.core[0]);
        }
        let mut best = (f64::INFINITY, p);
        for e in self.core_edges() {
            let c = e.closest_point(p);
            let d = c.dist(p);
            if d < best.0 {
                best = (d, c);
            }
        }
        best
    }

    /// Closest point of the (closed) core to `p`.
    pub fn closest_core_point(&self, p: Point2) -> Point2 {
        if self.core_contains(p) {
            p
        } else {
            self.core_boundary_nearest(p).1
        }
    }

    pub fn dist_to_core(&self, p: Point2) -> f64 {
        if self.core_contains(p) {
            0.0
        } else {
            self.core_boundary_nearest(p).0
        }
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        lo.dist(hi)
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.dist_to_core(p) < self.epsilon - 1e-12 * self.scale()
    }

    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        if self.core_contains(p) {
            self.epsilon + self.core_boundary_nearest(p).0
        } else {
            (self.epsilon - self.core_boundary_nearest(p).0).abs()
        }
    }

    /// Outward unit normal of the boundary point nearest to `p`.
    pub fn outward_normal_near(&self, p: Point2) -> Point2 {
        let (d, c) = self.core_boundary_nearest(p);
        if !self.core_contains(p) && d > 0.0 {
            return (p - c) * (1.0 / d);
        }
        // inside the core or on its boundary: use the nearest edge's outward normal
        let mut best = (f64::INFINITY, Point2::new(1.0, 0.0));
        for e in self.core_edges() {
            let dd = e.dist(p);
            if dd < best.0 {
                best = (dd, -e.inward_normal());
            }
        }
        best.1
    }

    pub fn nearest_boundary_point(&self, p: Point2) -> Point2 {
        let c = self.closest_core_point(p);
        if self.core_contains(p) || c.dist(p) == 0.0 {
            let (_, f) = self.core_boundary_nearest(p);
            return f + self.outward_normal_near(p) * self.epsilon;
        }
        c + (p - c).normalized() * self.epsilon
    }

    pub fn ray_exit(&self, p: Point2, dir: Point2, t_max: f64) -> Option<f64> {
        let eps = self.epsilon;
        let mut best = f64::NEG_INFINITY;
        for e in self.core_edges() {
            let n = -e.inward_normal();
            let off = Segment::new(e.a + n * eps, e.b + n * eps);
            if let Some(t) = off.ray_hit(p, dir, 0.0) {
                best = best.max(t);
            }
        }
        let dd = dir.norm2();
        for &v in &self.core {
            let w = p - v;
            let b = w.dot(dir) / dd;
            let c = (w.norm2() - eps * eps) / dd;
            let disc = b * b - c;
            if disc >= 0.0 {
                best = best.max(-b + disc.sqrt());
            }
        }
        (best > 0.0 && best <= t_max * (1.0 + 1e-12)).then(|| best.min(t_max))
    }

    pub fn area(&self) -> f64 {
        let core_area = if self.core.len() >= 3 {
            let n = self.core.len();
            0.5 * (0..n)
                .map(|i| self.core[i].cross(self.core[(i + 1) % n]))
                .sum::<f64>()
        } else {
            0.0
        };
        let per: f64 = self.core_edges().iter().map(Segment::length).sum();
        core_area + per * self.epsilon + PI * self.epsilon * self.epsilon
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.core {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let e = Point2::new(self.epsilon, self.epsilon);
        (lo - e, hi + e)
    }

    /// Euclidean diameter, which equals the inner diameter by convexity.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.core.iter().enumerate() {
            for q in &self.core[i + 1..] {
                d = d.max(p.dist(*q));
            }
        }
        d + 2.0 * self.epsilon
    }

    pub fn dilate(&self, c: f64, center: Point2) -> Result<Self> {
        Ok(Self {
            base: self.base.dilate(c, center)?,
            mode: self.mode,
            epsilon: self.epsilon * c,
            core: self.core.iter().map(|&p| center + (p - center) * c).collect(),
        })
    }
}

/// Moves every vertex of a convex polygon by `eps` inward along its angle bisector.
fn shrink_along_bisectors(base: &PolygonDomain, eps: f64) -> Result<Vec<Point2>> {
    let v = base.vertices();
    let n = v.len();
    let tol = 1e-12 * base.scale();
    let mut moved: Vec<Point2> = (0..n)
        .map(|i| {
            let to_prev = (v[(i + n - 1) % n] - v[i]).normalized();
            let to_next = (v[(i + 1) % n] - v[i]).normalized();
            v[i] + (to_prev + to_next).normalized() * eps
        })
        .collect();
    // merge vertices that met
    let mut core: Vec<Point2> = Vec::with_capacity(n);
    for p in moved.drain(..) {
        if core.last().is_none_or(|q: &Point2| q.dist(p) > 1e-9 * base.scale()) {
            core.push(p);
        }
    }
    while core.len() > 1 && core[0].dist(*core.last().unwrap()) <= 1e-9 * base.scale() {
        core.pop();
    }
    if core.len() >= 3 {
        let m = core.len();
        for i in 0..m {
            let (a, b, c) = (core[i], core[(i + 1) % m], core[(i + 2) % m]);
            if (b - a).cross(c - b) < -tol {
                return Err(Error::Construction(format!(
                    "corner radius {eps} too large: shrunken core is not convex"
                )));
            }
        }
    }
    if core.iter().any(|&p| !base.contains_closure(p)) {
        return Err(Error::Construction(format!(
            "corner radius {eps} too large for the base polygon"
        )));
    }
    Ok(core)
}
