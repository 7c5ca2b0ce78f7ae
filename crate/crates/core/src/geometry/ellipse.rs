use std::f64::consts::PI;

use super::point::Point2;
use crate::{Error, Result};

/// Ellipse with semi-axes `a >= b > 0`, rotated by `rotation` radians about its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseDomain {
    pub center: Point2,
    pub a: f64,
    pub b: f64,
    pub rotation: f64,
}

impl EllipseDomain {
    pub fn new(center: Point2, a: f64, b: f64, rotation: f64) -> Result<Self> {
        if !(b > 0.0) || !(a >= b) || !a.is_finite() || !center.is_finite() || !rotation.is_finite()
        {
            return Err(Error::Degenerate(format!(
                "ellipse needs a >= b > 0, got a={a}, b={b}"
            )));
        }
        Ok(Self { center, a, b, rotation })
    }

    pub fn disk(center: Point2, r: f64) -> Result<Self> {
        Self::new(center, r, r, 0.0)
    }

    fn to_local(self, p: Point2) -> Point2 {
        (p - self.center).rotate(-self.rotation)
    }

    fn to_global(self, q: Point2) -> Point2 {
        q.rotate(self.rotation) + self.center
    }

    pub fn area(&self) -> f64 {
        PI * self.a * self.b
    }

    fn level(&self, q: Point2) -> f64 {
        (q.x / self.a).powi(2) + (q.y / self.b).powi(2)
    }

    pub fn contains(&self, p: Point2) -> bool {
        let q = self.to_local(p);
        let f = self.level(q);
        if f >= 1.0 {
            return false;
        }
        if f < 1.0 - 1e-9 {
            return true;
        }
        self.closest_local(q).1 > 1e-12 * self.a
    }

    /// Closest boundary point (local frame) and its distance.
    fn closest_local(&self, q: Point2) -> (Point2, f64) {
        let (y0, y1) = (q.x.abs(), q.y.abs());
        let (x0, x1) = closest_first_quadrant(self.a, self.b, y0, y1);
        let c = Point2::new(x0.copysign(q.x), x1.copysign(q.y));
        (c, c.dist(q))
    }

    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        self.closest_local(self.to_local(p)).1
    }

    pub fn nearest_boundary_point(&self, p: Point2) -> Point2 {
        self.to_global(self.closest_local(self.to_local(p)).0)
    }

    /// Outward unit normal at the boundary point nearest to `p`.
    pub fn outward_normal_near(&self, p: Point2) -> Point2 {
        let (c, _) = self.closest_local(self.to_local(p));
        let n = Point2::new(c.x / (self.a * self.a), c.y / (self.b * self.b)).normalized();
        n.rotate(self.rotation)
    }

    /// Exit parameter of the ray `p + t * dir` from inside, if it is at most `t_max`.
    pub fn ray_exit(&self, p: Point2, dir: Point2, t_max: f64) -> Option<f64> {
        let q = self.to_local(p);
        let d = dir.rotate(-self.rotation);
        let (ia, ib) = (1.0 / (self.a * self.a), 1.0 / (self.b * self.b));
        let qa = d.x * d.x * ia + d.y * d.y * ib;
        let qb = 2.0 * (q.x * d.x * ia + q.y * d.y * ib);
        let qc = q.x * q.x * ia + q.y * q.y * ib - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        // numerically stable larger root
        let t = if qb >= 0.0 {
            -2.0 * qc / (qb + s)
        } else {
            (-qb + s) / (2.0 * qa)
        };
        let t = if qb >= 0.0 && qb + s == 0.0 { 0.0 } else { t };
        (t > 0.0 && t <= t_max * (1.0 + 1e-12)).then(|| t.min(t_max))
    }

    pub fn boundary_point(&self, theta: f64) -> Point2 {
        self.to_global(Point2::new(self.a * theta.cos(), self.b * theta.sin()))
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let (c, s) = (self.rotation.cos(), self.rotation.sin());
        let hx = ((self.a * c).powi(2) + (self.b * s).powi(2)).sqrt();
        let hy = ((self.a * s).powi(2) + (self.b * c).powi(2)).sqrt();
        (
            Point2::new(self.center.x - hx, self.center.y - hy),
            Point2::new(self.center.x + hx, self.center.y + hy),
        )
    }

    pub fn dilate(&self, c: f64, center: Point2) -> Result<Self> {
        Self::new(
            center + (self.center - center) * c,
            self.a * c,
            self.b * c,
            self.rotation,
        )
    }
}

fn robust_length(u: f64, v: f64) -> f64 {
    u.hypot(v)
}

/// Root of `(r0 z0 / (s + r0))^2 + (z1 / (s + 1))^2 = 1` by bisection.
fn get_root(r0: f64, z0: f64, z1: f64, mut g: f64) -> f64 {
    let n0 = r0 * z0;
    let mut s0 = z1 - 1.0;
    let mut s1 = if g < 0.0 {
        0.0
    } else {
        robust_length(n0, z1) - 1.0
    };
    let mut s = 0.0;
    for _ in 0..2100 {
        s = 0.5 * (s0 + s1);
        if s == s0 || s == s1 {
            break;
        }
        let r0s = n0 / (s + r0);
        let r1s = z1 / (s + 1.0);
        g = r0s * r0s + r1s * r1s - 1.0;
        if g > 0.0 {
            s0 = s;
        } else if g < 0.0 {
            s1 = s;
        } else {
            break;
        }
    }
    s
}

/// Closest point on the ellipse `x0²/e0² + x1²/e1² = 1` (e0 >= e1) to `(y0, y1)` with y0, y1 >= 0.
fn closest_first_quadrant(e0: f64, e1: f64, y0: f64, y1: f64) -> (f64, f64) {
    if y1 > 0.0 {
        if y0 > 0.0 {
            let z0 = y0 / e0;
            let z1 = y1 / e1;
            let g = z0 * z0 + z1 * z1 - 1.0;
            if g != 0.0 {
                let r0 = (e0 / e1).powi(2);
                let sbar = get_root(r0, z0, z1, g);
                (r0 * y0 / (sbar + r0), y1 / (sbar + 1.0))
            } else {
                (y0, y1)
            }
        } else {
            (0.0, e1)
        }
    } else {
        let numer0 = e0 * y0;
        let denom0 = e0 * e0 - e1 * e1;
        if numer0 < denom0 {
            let xde0 = numer0 / denom0;
            (e0 * xde0, e1 * (1.0 - xde0 * xde0).max(0.0).sqrt())
        } else {
            (e0, 0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_distances() {
        let d = EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap();
        assert!((d.dist_to_boundary(Point2::new(0.25, 0.0)) - 0.75).abs() < 1e-14);
        assert!((d.dist_to_boundary(Point2::ORIGIN) - 1.0).abs() < 1e-14);
        assert!(!d.contains(Point2::new(1.0, 0.0)));
        assert!(d.contains(Point2::new(0.5, 0.5)));
    }

    #[test]
    fn ellipse_distance_matches_brute_force() {
        let e = EllipseDomain::new(Point2::new(0.3, -0.2), 2.0, 0.7, 0.4).unwrap();
        let samples: Vec<Point2> = (0..20000)
            .map(|k| e.boundary_point(2.0 * PI * k as f64 / 20000.0))
            .collect();
        for p in [
            Point2::new(0.3, -0.2),
            Point2::new(1.0, 0.1),
            Point2::new(-1.2, -0.6),
            Point2::new(0.5, 0.3),
        ] {
            assert!(e.contains(p));
            let brute = samples.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min);
            let d = e.dist_to_boundary(p);
            assert!(d <= brute + 1e-12 && brute - d < 1e-6, "{d} vs {brute}");
        }
    }

    #[test]
    fn ray_exit_reaches_boundary() {
        let e = EllipseDomain::new(Point2::ORIGIN, 2.0, 1.0, 0.0).unwrap();
        let t = e.ray_exit(Point2::ORIGIN, Point2::new(1.0, 0.0), 10.0).unwrap();
        assert!((t - 2.0).abs() < 1e-14);
        assert!(e.ray_exit(Point2::ORIGIN, Point2::new(0.0, 1.0), 0.5).is_none());
        assert!((e.area() - 2.0 * PI).abs() < 1e-14);
    }
}
