use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Closed segment `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn direction(&self) -> Point2 {
        self.b - self.a
    }

    /// Left unit normal; for a counterclockwise boundary walk this points into the domain.
    pub fn inward_normal(&self) -> Point2 {
        self.direction().perp().normalized()
    }

    /// Parameter of the closest point, clamped to `[0, 1]`.
    pub fn project(&self, p: Point2) -> f64 {
        let d = self.direction();
        let l2 = d.norm2();
        if l2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / l2).clamp(0.0, 1.0)
    }

    pub fn closest_point(&self, p: Point2) -> Point2 {
        self.a.lerp(self.b, self.project(p))
    }

    pub fn dist(&self, p: Point2) -> f64 {
        p.dist(self.closest_point(p))
    }

    /// Smallest `t > t_min` with `origin + t * dir` on the segment; `dir` need not be unit.
    pub fn ray_hit(&self, origin: Point2, dir: Point2, t_min: f64) -> Option<f64> {
        let e = self.direction();
        let denom = dir.cross(e);
        let w = self.a - origin;
        let scale = e.norm() * dir.norm();
        if denom.abs() > 1e-14 * scale {
            let t = w.cross(e) / denom;
            let s = w.cross(dir) / denom;
            let tol = 1e-12;
            if s >= -tol && s <= 1.0 + tol && t > t_min {
                return Some(t);
            }
            return None;
        }
        // parallel: only a collinear overlap counts
        if w.cross(dir).abs() > 1e-12 * scale.max(1e-300) * (1.0 + w.norm()) {
            return None;
        }
        let d2 = dir.norm2();
        let ta = (self.a - origin).dot(dir) / d2;
        let tb = (self.b - origin).dot(dir) / d2;
        let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
        if hi <= t_min {
            None
        } else if lo > t_min {
            Some(lo)
        } else {
            Some(t_min.max(0.0))
        }
    }
}

/// Proper crossing of the open segments (transversal, away from all endpoints).
pub(crate) fn segments_cross_properly(p: Segment, q: Segment) -> bool {
    let r = p.direction();
    let s = q.direction();
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if denom.abs() <= 1e-12 * scale {
        return false;
    }
    let w = q.a - p.a;
    let t = w.cross(s) / denom;
    let u = w.cross(r) / denom;
    let eps = 1e-10;
    t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps
}

/// Parameters along `p` (in `[0, 1]`) at which it touches `q`, including collinear overlaps.
pub(crate) fn touch_parameters(p: Segment, q: Segment, out: &mut Vec<f64>) {
    let r = p.direction();
    let s = q.direction();
    let rr = r.norm2();
    if rr == 0.0 {
        return;
    }
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    let w = q.a - p.a;
    let tol = 1e-10;
    if denom.abs() > 1e-12 * scale {
        let t = w.cross(s) / denom;
        let u = w.cross(r) / denom;
        if t >= -tol && t <= 1.0 + tol && u >= -tol && u <= 1.0 + tol {
            out.push(t.clamp(0.0, 1.0));
        }
        return;
    }
    if w.cross(r).abs() > 1e-10 * r.norm() * (1.0 + w.norm()) {
        return;
    }
    for e in [q.a, q.b] {
        let t = (e - p.a).dot(r) / rr;
        if (-tol..=1.0 + tol).contains(&t) {
            out.push(t.clamp(0.0, 1.0));
        }
    }
    for e in [p.a, p.b] {
        let u = (e - q.a).dot(s) / s.norm2();
        if (-tol..=1.0 + tol).contains(&u) {
            out.push(if e == p.a { 0.0 } else { 1.0 });
        }
    }
}
