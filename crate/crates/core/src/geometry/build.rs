use std::f64::consts::PI;

use rand::Rng;

use super::point::{Point2, Segment};
use super::polygon::PolygonDomain;
use super::Domain;
use crate::{Error, Result};

/// Triangle with vertices `v1, v2, v3` (reordered counterclockwise if needed).
pub fn build_triangle(v1: Point2, v2: Point2, v3: Point2) -> Result<PolygonDomain> {
    let vs = if (v2 - v1).cross(v3 - v1) < 0.0 {
        vec![v1, v3, v2]
    } else {
        vec![v1, v2, v3]
    };
    PolygonDomain::new(vs)
}

pub fn rectangle(lo: Point2, hi: Point2) -> Result<PolygonDomain> {
    PolygonDomain::new(vec![
        lo,
        Point2::new(hi.x, lo.y),
        hi,
        Point2::new(lo.x, hi.y),
    ])
}

/// Regular `n`-gon with side `l`; side 0 is horizontal at the bottom, sides are labelled counterclockwise.
pub fn build_regular_polygon(n: usize, l: f64, center: Point2) -> Result<PolygonDomain> {
    if n < 3 {
        return Err(Error::Precondition(format!("regular polygon needs n >= 3, got {n}")));
    }
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("side length must be positive, got {l}")));
    }
    let r = l / (2.0 * (PI / n as f64).sin());
    let start = -PI / 2.0 - PI / n as f64;
    let vs = (0..n)
        .map(|k| {
            let t = start + 2.0 * PI * k as f64 / n as f64;
            center + Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    PolygonDomain::new(vs)
}

/// A triangle with a small equilateral bump attached to its bottom side.
#[derive(Debug, Clone)]
pub struct PerturbedTriangle {
    pub polygon: PolygonDomain,
    pub triangle: PolygonDomain,
    pub eps: f64,
    pub p: f64,
    /// `A1, C1, C3, C2, A2` along the perturbed side.
    pub a1: Point2,
    pub c1: Point2,
    pub c3: Point2,
    pub c2: Point2,
    pub a2: Point2,
    /// Distinguished interior point `(p, eps)`.
    pub x_eps: Point2,
}

impl PerturbedTriangle {
    /// Distances to `A1C1`, `C1C3`, `C3C2`, `C2A2`.
    pub fn side_distances(&self, q: Point2) -> [f64; 4] {
        [
            Segment::new(self.a1, self.c1).dist(q),
            Segment::new(self.c1, self.c3).dist(q),
            Segment::new(self.c3, self.c2).dist(q),
            Segment::new(self.c2, self.a2).dist(q),
        ]
    }

    /// Centroid of the bump triangle `C1 C2 C3`.
    pub fn bump_centroid(&self) -> Point2 {
        (self.c1 + self.c2 + self.c3) * (1.0 / 3.0)
    }
}

/// Attaches an equilateral bump of side `eps` centred at `(p, 0)` to the side `A1A2` of `t`,
/// which must run along the positive x-axis from the origin. The bump points away from `t`.
pub fn build_perturbed_triangle(t: &PolygonDomain, p: f64, eps: f64) -> Result<PerturbedTriangle> {
    if t.num_sides() != 3 {
        return Err(Error::Precondition("base domain must be a triangle".into()));
    }
    let tol = 1e-12 * t.scale();
    let vs = t.vertices();
    let i1 = (0..3)
        .find(|&i| vs[i].norm() <= tol)
        .ok_or_else(|| Error::Precondition("triangle must have a vertex at the origin".into()))?;
    let a1 = vs[i1];
    let a2 = vs[(i1 + 1) % 3];
    let a3 = vs[(i1 + 2) % 3];
    if a2.y.abs() > tol || a2.x <= 0.0 {
        return Err(Error::Precondition(
            "side A1A2 must lie on the positive x-axis".into(),
        ));
    }
    let l = a2.x;
    if !(eps > 0.0 && eps < l / 2.0) {
        return Err(Error::Precondition(format!("eps must lie in (0, {}), got {eps}", l / 2.0)));
    }
    if !(p > eps && p < l - eps) {
        return Err(Error::Precondition(format!(
            "p must lie in ({eps}, {}), got {p}",
            l - eps
        )));
    }
    let c1 = Point2::new(p - eps / 2.0, 0.0);
    let c2 = Point2::new(p + eps / 2.0, 0.0);
    let c3 = Point2::new(p, -eps * 3f64.sqrt() / 2.0);
    let polygon = PolygonDomain::new(vec![a1, c1, c3, c2, a2, a3])?;
    Ok(PerturbedTriangle {
        polygon,
        triangle: t.clone(),
        eps,
        p,
        a1,
        c1,
        c3,
        c2,
        a2,
        x_eps: Point2::new(p, eps),
    })
}

/// Replaces side `side_id` by `count` adjacent outward isosceles teeth of the given height.
///
/// The replaced side carries `2 * count + 1` vertices: its two endpoints, the
/// `count - 1` shared tooth bases and the `count` apexes.
pub fn build_sawtooth_side(
    t: &PolygonDomain,
    side_id: usize,
    count: usize,
    height: f64,
) -> Result<PolygonDomain> {
    if side_id >= t.num_sides() {
        return Err(Error::InvalidSide(side_id));
    }
    if count == 0 {
        return Err(Error::Precondition("tooth count must be at least 1".into()));
    }
    if height == 0.0 {
        return Ok(t.clone());
    }
    if !(height > 0.0) {
        return Err(Error::Precondition(format!("height must be positive, got {height}")));
    }
    let inradius = super::measures::chebyshev_radius(t);
    if height >= inradius {
        return Err(Error::Construction(format!(
            "tooth height {height} is not below the inradius {inradius}"
        )));
    }
    let s = t.side(side_id);
    let out = -s.inward_normal();
    let mut walk = Vec::with_capacity(t.num_sides() + 2 * count);
    let n = t.num_sides();
    for k in 0..n {
        let i = (side_id + 1 + k) % n;
        walk.push(t.vertices()[i]);
    }
    // walk now ends with the start of the replaced side
    for j in 0..count {
        let mid = s.a.lerp(s.b, (j as f64 + 0.5) / count as f64);
        walk.push(mid + out * height);
        if j + 1 < count {
            walk.push(s.a.lerp(s.b, (j + 1) as f64 / count as f64));
        }
    }
    // restore the original starting vertex
    walk.rotate_left(n - side_id - 1);
    PolygonDomain::new(walk).map_err(|e| match e {
        Error::Degenerate(m) => Error::Construction(m),
        other => other,
    })
}

/// Convex hull of `n` uniform points in the unit disk (retried until it has at least 3 vertices).
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize) -> Result<PolygonDomain> {
    let n = n.max(3);
    loop {
        let pts: Vec<Point2> = (0..n)
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                let t = rng.gen::<f64>() * 2.0 * PI;
                Point2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let hull = convex_hull(pts);
        if hull.len() >= 3 {
            if let Ok(p) = PolygonDomain::new(hull) {
                if p.area() > 0.05 {
                    return Ok(p);
                }
            }
        }
    }
}

/// Triangle with all angles at least `min_angle`, longest-side scale 1, `A1` at the origin
/// and `A2 = (1, 0)`.
pub fn random_triangle<R: Rng>(rng: &mut R, min_angle: f64) -> Result<PolygonDomain> {
    if !(min_angle > 0.0 && min_angle < PI / 3.0) {
        return Err(Error::Precondition(format!(
            "minimum angle must lie in (0, π/3), got {min_angle}"
        )));
    }
    let (a1, a2) = loop {
        let a1 = rng.gen_range(min_angle..PI - 2.0 * min_angle);
        let a2 = rng.gen_range(min_angle..PI - 2.0 * min_angle);
        if PI - a1 - a2 >= min_angle {
            break (a1, a2);
        }
    };
    let a3 = PI - a1 - a2;
    let side13 = a2.sin() / a3.sin();
    build_triangle(
        Point2::ORIGIN,
        Point2::new(1.0, 0.0),
        Point2::new(side13 * a1.cos(), side13 * a1.sin()),
    )
}

fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let k = lower.len();
            if (lower[k - 1] - lower[k - 2]).cross(p - lower[k - 2]) <= 0.0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let k = upper.len();
            if (upper[k - 1] - upper[k - 2]).cross(p - upper[k - 2]) <= 0.0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Homothetic family `V_c = center + c (V - center)`.
#[derive(Debug, Clone)]
pub struct DilationFamily {
    pub base: Domain,
    pub center: Point2,
}

impl DilationFamily {
    pub fn new(base: Domain, center: Point2) -> Self {
        Self { base, center }
    }

    /// `μ(V_c) / μ(V)`.
    pub fn growth_volume(&self, c: f64) -> f64 {
        c * c
    }

    /// `diam(V_c) / diam(V)`.
    pub fn growth_diameter(&self, c: f64) -> f64 {
        c
    }

    pub fn member(&self, c: f64) -> Result<Domain> {
        self.base.dilate(c, self.center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_angles() {
        let t = build_triangle(
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        )
        .unwrap();
        for a in t.angles() {
            assert!((a - PI / 3.0).abs() < 1e-12);
        }
        let r = build_triangle(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)).unwrap();
        let mut a = r.angles().to_vec();
        a.sort_by(f64::total_cmp);
        assert!((a[0] - PI / 4.0).abs() < 1e-12 && (a[2] - PI / 2.0).abs() < 1e-12);
        assert!(build_triangle(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(1.0, 1e-14)).is_err());
    }

    #[test]
    fn regular_polygons() {
        let h = build_regular_polygon(6, 1.0, Point2::ORIGIN).unwrap();
        for v in h.vertices() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let s = build_regular_polygon(4, 1.0, Point2::ORIGIN).unwrap();
        assert!((s.side(0).a.y - s.side(0).b.y).abs() < 1e-15);
        assert!((s.perimeter() - 4.0).abs() < 1e-12);
        assert!(build_regular_polygon(2, 1.0, Point2::ORIGIN).is_err());
    }

    #[test]
    fn perturbed_triangle_layout() {
        let t = build_triangle(
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        )
        .unwrap();
        let u = build_perturbed_triangle(&t, 0.5, 0.1).unwrap();
        assert_eq!(u.polygon.num_sides(), 6);
        assert_eq!(u.x_eps, Point2::new(0.5, 0.1));
        assert!((u.polygon.area() - (t.area() + 0.01 * 3f64.sqrt() / 4.0)).abs() < 1e-14);
        let reflex = u.polygon.angles().iter().filter(|&&a| a > PI).count();
        assert_eq!(reflex, 2);
        assert!(build_perturbed_triangle(&t, 0.1, 0.1).is_err());
    }

    #[test]
    fn sawtooth_counts() {
        let t = build_triangle(
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        )
        .unwrap();
        let s = build_sawtooth_side(&t, 0, 6, 0.02).unwrap();
        assert_eq!(s.num_sides(), 3 + 2 * 6 - 1);
        assert!((s.area() - (t.area() + 0.5 * 0.02)).abs() < 1e-14);
        assert_eq!(build_sawtooth_side(&t, 0, 6, 0.0).unwrap().vertices(), t.vertices());
        assert!(build_sawtooth_side(&t, 0, 6, 0.5).is_err());
    }

    #[test]
    fn random_shapes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_triangle(&mut rng, 20f64.to_radians()).unwrap();
            assert!(t.angles().iter().all(|&a| a >= 20f64.to_radians() - 1e-12));
            let p = random_convex_polygon(&mut rng, 12).unwrap();
            assert!(p.is_convex());
        }
    }
}
