//! Closed-form profiles comparable to the principal eigenfunction.
//!
//! Every evaluator returns `0` on the boundary of its domain, a positive value
//! in the interior and an error for points outside the closed domain.

use std::f64::consts::{PI, SQRT_2};

use crate::geometry::{EllipseDomain, PerturbedTriangle, Point2, PolygonDomain, SideMetric};
use crate::{Error, Result};

/// Exponent attached to the bump-vertex factors of the perturbed triangle profile.
const BUMP_EXPONENT: f64 = 1.25;

/// `2√2 a^{-3/2} min{x, a − x}` on `[0, a]`.
pub fn phi_interval(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Precondition(format!("interval length must be positive, got {a}")));
    }
    if !(0.0..=a).contains(&x) {
        return Err(Error::Precondition(format!("{x} lies outside [0, {a}]")));
    }
    Ok(2.0 * SQRT_2 * a.powf(-1.5) * x.min(a - x))
}

fn require_triangle(t: &PolygonDomain) -> Result<()> {
    if t.num_sides() != 3 || !t.slits().is_empty() {
        return Err(Error::Precondition("expected a triangle".into()));
    }
    Ok(())
}

fn require_closure(p: &PolygonDomain, q: Point2) -> Result<()> {
    if p.contains_closure(q) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("({}, {}) lies outside the domain", q.x, q.y)))
    }
}

/// Triangle profile: `d_1 d_2 d_3 Π (d_j + d_k)^{π/α_i − 2} / diam^{Σπ/α_i − 2}`,
/// where `d_i` is the distance to the side opposite vertex `i` and the pair
/// `(j, k)` consists of the two sides meeting at vertex `i`.
pub fn phi_triangle(t: &PolygonDomain, p: Point2) -> Result<f64> {
    require_triangle(t)?;
    require_closure(t, p)?;
    let v = t.vertices();
    // side opposite vertex i runs from v[i+1] to v[i+2], which is side index i+1
    let d: [f64; 3] = std::array::from_fn(|i| t.side((i + 1) % 3).dist(p));
    if d.iter().any(|&x| x <= 0.0) {
        return Ok(0.0);
    }
    let diam = (0..3).map(|i| v[i].dist(v[(i + 1) % 3])).fold(0.0, f64::max);
    let alpha = t.angles();
    let mut value = d[0] * d[1] * d[2];
    let mut total = 0.0;
    for i in 0..3 {
        let e = PI / alpha[i];
        total += e;
        value *= (d[(i + 1) % 3] + d[(i + 2) % 3]).powf(e - 2.0);
    }
    Ok(value / diam.powf(total - 2.0))
}

/// Which of the two perturbed-triangle expressions produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbedBranch {
    /// The rational expression in `d_1..d_4` valid on `2B ∩ U`.
    Near,
    /// The unperturbed triangle profile valid on `T ∖ B`.
    Far,
}

/// Radius of the ball `B` around the bump centroid and membership in `B`, `2B`.
fn bump_ball(u: &PerturbedTriangle, p: Point2) -> (bool, bool) {
    let r = p.dist(u.bump_centroid());
    (r < u.eps, r < 2.0 * u.eps)
}

fn near_expression(u: &PerturbedTriangle, phi_t_at_xeps: f64, p: Point2) -> f64 {
    let [d1, d2, d3, d4] = u.side_distances(p);
    if d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0 || d4 <= 0.0 {
        return 0.0;
    }
    let e = u.eps;
    let b = BUMP_EXPONENT;
    let num = d1 * d2 * d3 * d4 * (d2 + d3) * (d1 + d2 + e).powf(b) * (d3 + d4 + e).powf(b);
    let den = (d1 + e)
        * (d2 + e)
        * (d3 + e)
        * (d4 + e)
        * (d2 + d3 + e)
        * (d1 + d2).powf(b)
        * (d3 + d4).powf(b);
    num / den * phi_t_at_xeps
}

fn check_perturbed(u: &PerturbedTriangle, p: Point2) -> Result<()> {
    let l = u.a2.x - u.a1.x;
    if !(u.eps > 0.0 && u.eps < l / 2.0) {
        return Err(Error::Precondition(format!("eps {} out of range", u.eps)));
    }
    require_closure(&u.polygon, p)
}

/// Both branch values at `p` where they apply (`None` outside a branch's region).
pub fn perturbed_triangle_branches(
    u: &PerturbedTriangle,
    phi_t_at_xeps: f64,
    phi_t: impl Fn(Point2) -> f64,
    p: Point2,
) -> Result<(Option<f64>, Option<f64>)> {
    check_perturbed(u, p)?;
    let (in_b, in_2b) = bump_ball(u, p);
    let near = in_2b.then(|| near_expression(u, phi_t_at_xeps, p));
    let far = (!in_b && u.triangle.contains_closure(p)).then(|| {
        if u.polygon.on_boundary(p) {
            0.0
        } else {
            phi_t(p)
        }
    });
    Ok((near, far))
}

/// Profile of the triangle with an equilateral bump: the near expression on
/// `2B ∩ U`, otherwise `phi_t`.
pub fn phi_perturbed_triangle(
    u: &PerturbedTriangle,
    phi_t_at_xeps: f64,
    phi_t: impl Fn(Point2) -> f64,
    p: Point2,
) -> Result<(f64, PerturbedBranch)> {
    match perturbed_triangle_branches(u, phi_t_at_xeps, phi_t, p)? {
        (Some(v), _) => Ok((v, PerturbedBranch::Near)),
        (None, Some(v)) => Ok((v, PerturbedBranch::Far)),
        (None, None) => Err(Error::Internal("point covered by neither branch".into())),
    }
}

/// Numerical checks of the polygon hypotheses that can be tested directly.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonAssumptions {
    /// `max(max l_i / r, r / min l_i)`.
    pub side_ratio: f64,
    pub min_angle: f64,
    pub side_ratio_ok: bool,
    pub angle_ok: bool,
}

impl PolygonAssumptions {
    pub fn holds(&self) -> bool {
        self.side_ratio_ok && self.angle_ok
    }
}

/// Product profile for a polygon whose sides share a common scale `r`.
#[derive(Debug, Clone)]
pub struct PolygonCaricature {
    polygon: PolygonDomain,
    r: f64,
    metric: SideMetric,
    assumptions: PolygonAssumptions,
}

/// Geometric mean of the side lengths.
pub fn default_side_scale(p: &PolygonDomain) -> f64 {
    let ls = p.side_lengths();
    (ls.iter().map(|l| l.ln()).sum::<f64>() / ls.len() as f64).exp()
}

impl PolygonCaricature {
    /// `r = None` uses [`default_side_scale`]. The side-ratio bound `c` and the
    /// angle floor `alpha` only feed the assumption report.
    pub fn new(polygon: PolygonDomain, r: Option<f64>, c: f64, alpha: f64) -> Result<Self> {
        let r = r.unwrap_or_else(|| default_side_scale(&polygon));
        if !(r > 0.0) {
            return Err(Error::Precondition(format!("side scale must be positive, got {r}")));
        }
        let ls = polygon.side_lengths();
        let lmax = ls.iter().cloned().fold(0.0, f64::max);
        let lmin = ls.iter().cloned().fold(f64::INFINITY, f64::min);
        let side_ratio = (lmax / r).max(r / lmin);
        let min_angle = polygon.angles().iter().cloned().fold(f64::INFINITY, f64::min);
        let assumptions = PolygonAssumptions {
            side_ratio,
            min_angle,
            side_ratio_ok: side_ratio <= c,
            angle_ok: min_angle > alpha,
        };
        if !assumptions.holds() {
            log::warn!(
                "polygon assumptions fail: side ratio {side_ratio:.3} (bound {c}), min angle {min_angle:.4} (floor {alpha})"
            );
        }
        Ok(Self {
            polygon,
            r,
            metric: SideMetric::Geodesic,
            assumptions,
        })
    }

    /// Switch the side distances to Euclidean (the default is geodesic).
    pub fn with_metric(mut self, metric: SideMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn polygon(&self) -> &PolygonDomain {
        &self.polygon
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn assumptions(&self) -> &PolygonAssumptions {
        &self.assumptions
    }

    pub fn eval(&self, p: Point2) -> Result<f64> {
        let poly = &self.polygon;
        require_closure(poly, p)?;
        if poly.on_boundary(p) {
            return Ok(0.0);
        }
        let d = poly.dist_sides(p, self.metric)?;
        if d.iter().any(|&x| x <= 0.0) {
            return Ok(0.0);
        }
        let n = d.len();
        let alpha = poly.angles();
        let mut value = 1.0;
        let mut total = 0.0;
        for i in 0..n {
            // sides i and i+1 meet at vertex i+1
            let e = PI / alpha[(i + 1) % n];
            total += e;
            value *= d[i] * (d[i] + d[(i + 1) % n]).powf(e - 2.0);
        }
        Ok(value / self.r.powf(total - n as f64 + 1.0))
    }
}

/// One-off evaluation of the polygon profile with geodesic side distances.
pub fn phi_polygon(p: &PolygonDomain, r: f64, q: Point2) -> Result<f64> {
    PolygonCaricature::new(p.clone(), Some(r), f64::INFINITY, 0.0)?.eval(q)
}

/// Min-based profile of the regular `n`-gon with side `l` centred at `center`,
/// side 0 at the bottom and sides labelled counterclockwise.
pub fn phi_regular_polygon(n: usize, l: f64, center: Point2, p: Point2) -> Result<f64> {
    if n < 3 {
        return Err(Error::Precondition(format!("regular polygon needs n >= 3, got {n}")));
    }
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("side length must be positive, got {l}")));
    }
    let nf = n as f64;
    let apothem = l / (2.0 * (PI / nf).tan());
    let q = p - center;
    let tol = 1e-12 * l;
    let d: Vec<f64> = (0..n)
        .map(|k| {
            let t = -PI / 2.0 + 2.0 * PI * k as f64 / nf;
            let dk = apothem - q.dot(Point2::new(t.cos(), t.sin()));
            if dk.abs() <= tol {
                0.0
            } else {
                dk
            }
        })
        .collect();
    if d.iter().any(|&x| x < 0.0) {
        return Err(Error::Precondition(format!("({}, {}) lies outside the polygon", p.x, p.y)));
    }
    let mut min_prod = f64::INFINITY;
    let mut min_sum = f64::INFINITY;
    for i in 0..n {
        let j = (i + 1) % n;
        min_prod = min_prod.min(d[i] * d[j]);
        min_sum = min_sum.min(d[i] + d[j]);
    }
    if min_prod <= 0.0 {
        return Ok(0.0);
    }
    let e = nf / (nf - 2.0);
    Ok(min_prod * min_sum.powf(e - 2.0) / (nf * l).powf(e + 1.0))
}

/// `ρ / diam²` for an ellipse.
pub fn phi_ellipse(e: &EllipseDomain, p: Point2) -> Result<f64> {
    let rho = e.dist_to_boundary(p);
    if !e.contains(p) && rho > 1e-12 * e.a {
        return Err(Error::Precondition(format!("({}, {}) lies outside the ellipse", p.x, p.y)));
    }
    if !e.contains(p) {
        return Ok(0.0);
    }
    let diam = 2.0 * e.a.max(e.b);
    Ok(rho / (diam * diam))
}

/// Ground state `(1/l) cos(πx/2l) cos(πy/2l)` of the square `[−l, l]²`.
pub fn square_ground_state(l: f64) -> impl Fn(Point2) -> f64 + Clone + Send + Sync {
    move |p: Point2| (PI * p.x / (2.0 * l)).cos() * (PI * p.y / (2.0 * l)).cos() / l
}

/// Distance to the boundary of the square `[−l, l]²` with corner arcs of radius `eps`
/// (the `eps`-neighbourhood of `[−m, m]²`, `m = l − eps/√2`). Negative outside.
fn rounded_square_rho(l: f64, eps: f64, p: Point2) -> f64 {
    let m = l - eps / SQRT_2;
    let qx = p.x.abs() - m;
    let qy = p.y.abs() - m;
    if qx <= 0.0 && qy <= 0.0 {
        eps - qx.max(qy)
    } else {
        eps - Point2::new(qx.max(0.0), qy.max(0.0)).norm()
    }
}

/// Profile `ρ_U/(ρ_U + ε) · φ_V(x_ε, y_ε)` of the square `[−l, l]²` enlarged by
/// corner arcs of radius `eps`; `(x_ε, y_ε)` clamps each coordinate to `±(l − ε/√2)`.
pub fn phi_rounded_square(
    l: f64,
    eps: f64,
    phi_v: impl Fn(Point2) -> f64,
    p: Point2,
) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("half side must be positive, got {l}")));
    }
    if !(eps > 0.0 && eps <= l * SQRT_2 * (1.0 + 1e-12)) {
        return Err(Error::Precondition(format!("eps must lie in (0, l√2], got {eps}")));
    }
    let rho = rounded_square_rho(l, eps, p);
    let tol = 1e-12 * l;
    if rho < -tol {
        return Err(Error::Precondition(format!("({}, {}) lies outside the rounded square", p.x, p.y)));
    }
    if rho <= tol {
        return Ok(0.0);
    }
    let m = (l - eps / SQRT_2).max(0.0);
    let xe = Point2::new(p.x.clamp(-m, m), p.y.clamp(-m, m));
    Ok(rho / (rho + eps) * phi_v(xe))
}

/// The inner triangle `T^ε` whose vertices sit `eps` along each angle bisector of `t`.
pub fn bisector_triangle(t: &PolygonDomain, eps: f64) -> Result<[Point2; 3]> {
    require_triangle(t)?;
    let v = t.vertices();
    let alpha = t.angles();
    // the incentre lies r / sin(α_i/2) from vertex i along its bisector
    let per = t.perimeter();
    let inradius = 2.0 * t.area() / per;
    let limit = (0..3)
        .map(|i| inradius / (alpha[i] / 2.0).sin())
        .fold(f64::INFINITY, f64::min);
    if !(eps > 0.0 && eps < limit) {
        return Err(Error::Precondition(format!(
            "eps must lie in (0, {limit}) for a nondegenerate inner triangle, got {eps}"
        )));
    }
    let w: [Point2; 3] = std::array::from_fn(|i| {
        let a = v[i];
        let u1 = (v[(i + 1) % 3] - a).normalized();
        let u2 = (v[(i + 2) % 3] - a).normalized();
        a + (u1 + u2).normalized() * eps
    });
    if (w[1] - w[0]).cross(w[2] - w[0]) <= 0.0 {
        return Err(Error::Precondition("inner triangle is degenerate".into()));
    }
    Ok(w)
}

/// Profile of the `eps`-neighbourhood `U` of triangle `t`:
/// `ρ_U/(ρ_U + ε) · phi_t(x_ε)` with `x_ε` the closest point of [`bisector_triangle`].
pub fn phi_rounded_triangle(
    t: &PolygonDomain,
    eps: f64,
    phi_t: impl Fn(Point2) -> f64,
    p: Point2,
) -> Result<f64> {
    let inner = bisector_triangle(t, eps)?;
    let rho = if t.contains_closure(p) {
        eps + t.dist_to_boundary(p)
    } else {
        eps - t.dist_to_boundary(p)
    };
    let tol = 1e-12 * t.scale();
    if rho < -tol {
        return Err(Error::Precondition(format!("({}, {}) lies outside the neighbourhood", p.x, p.y)));
    }
    if rho <= tol {
        return Ok(0.0);
    }
    let xe = closest_in_triangle(&inner, p);
    Ok(rho / (rho + eps) * phi_t(xe))
}

fn closest_in_triangle(w: &[Point2; 3], p: Point2) -> Point2 {
    let inside = (0..3).all(|i| (w[(i + 1) % 3] - w[i]).cross(p - w[i]) >= 0.0);
    if inside {
        return p;
    }
    (0..3)
        .map(|i| crate::geometry::Segment::new(w[i], w[(i + 1) % 3]).closest_point(p))
        .min_by(|a, b| a.dist(p).total_cmp(&b.dist(p)))
        .unwrap_or(p)
}

/// A caricature together with the parameters it needs, evaluable at any point.
#[derive(Debug, Clone)]
pub enum CaricatureSpec {
    /// Interval `[0, a]`, evaluated at the `x` coordinate.
    Interval { a: f64 },
    Triangle(PolygonDomain),
    /// Bump-perturbed triangle; both branches use the triangle profile for `φ_T`.
    PerturbedTriangle(Box<PerturbedTriangle>),
    Polygon(Box<PolygonCaricature>),
    RegularPolygon { n: usize, l: f64, center: Point2 },
    Ellipse(EllipseDomain),
    /// Square `[−l, l]²` with corner arcs of radius `eps`, using the analytic `φ_V`.
    RoundedSquare { l: f64, eps: f64 },
    /// `eps`-neighbourhood of a triangle, using the triangle profile at `x_ε`.
    RoundedTriangle { triangle: PolygonDomain, eps: f64 },
}

impl CaricatureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CaricatureSpec::Interval { .. } => "interval",
            CaricatureSpec::Triangle(_) => "triangle",
            CaricatureSpec::PerturbedTriangle(_) => "perturbed_triangle",
            CaricatureSpec::Polygon(_) => "generic_polygon",
            CaricatureSpec::RegularPolygon { .. } => "regular_polygon",
            CaricatureSpec::Ellipse(_) => "ellipse",
            CaricatureSpec::RoundedSquare { .. } => "rounded_square",
            CaricatureSpec::RoundedTriangle { .. } => "rounded_triangle",
        }
    }

    pub fn eval(&self, p: Point2) -> Result<f64> {
        match self {
            CaricatureSpec::Interval { a } => phi_interval(*a, p.x),
            CaricatureSpec::Triangle(t) => phi_triangle(t, p),
            CaricatureSpec::PerturbedTriangle(u) => {
                let at_xeps = phi_triangle(&u.triangle, u.x_eps)?;
                let phi_t = |q: Point2| phi_triangle(&u.triangle, q).unwrap_or(0.0);
                Ok(phi_perturbed_triangle(u, at_xeps, phi_t, p)?.0)
            }
            CaricatureSpec::Polygon(c) => c.eval(p),
            CaricatureSpec::RegularPolygon { n, l, center } => {
                phi_regular_polygon(*n, *l, *center, p)
            }
            CaricatureSpec::Ellipse(e) => phi_ellipse(e, p),
            CaricatureSpec::RoundedSquare { l, eps } => {
                phi_rounded_square(*l, *eps, square_ground_state(*l), p)
            }
            CaricatureSpec::RoundedTriangle { triangle, eps } => {
                let phi_t = |q: Point2| phi_triangle(triangle, q).unwrap_or(0.0);
                phi_rounded_triangle(triangle, *eps, phi_t, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_perturbed_triangle, build_regular_polygon, build_triangle, rectangle};
    use approx::assert_relative_eq;

    fn equilateral(s: f64) -> PolygonDomain {
        build_triangle(
            Point2::ORIGIN,
            Point2::new(s, 0.0),
            Point2::new(s / 2.0, s * 3f64.sqrt() / 2.0),
        )
        .unwrap()
    }

    #[test]
    fn interval_values() {
        assert_relative_eq!(phi_interval(1.0, 0.5).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(phi_interval(1.0, 0.25).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(phi_interval(1.0, 0.0).unwrap(), 0.0);
        assert!(phi_interval(1.0, 1.5).is_err());
    }

    #[test]
    fn triangle_at_incenter() {
        let s = 2.0;
        let t = equilateral(s);
        let r = s / (2.0 * 3f64.sqrt());
        let c = t.centroid();
        assert_relative_eq!(
            phi_triangle(&t, c).unwrap(),
            8.0 * r.powi(6) / s.powi(7),
            max_relative = 1e-12
        );
        assert_eq!(phi_triangle(&t, Point2::new(1.0, 0.0)).unwrap(), 0.0);
        assert!(phi_triangle(&t, Point2::new(1.0, -0.1)).is_err());
    }

    #[test]
    fn triangle_invariant_under_relabeling() {
        let a = Point2::new(0.1, 0.2);
        let b = Point2::new(1.3, 0.0);
        let c = Point2::new(0.4, 0.9);
        let p = Point2::new(0.5, 0.35);
        let v1 = phi_triangle(&build_triangle(a, b, c).unwrap(), p).unwrap();
        let v2 = phi_triangle(&build_triangle(b, c, a).unwrap(), p).unwrap();
        let v3 = phi_triangle(&build_triangle(c, b, a).unwrap(), p).unwrap();
        assert_relative_eq!(v1, v2, max_relative = 1e-12);
        assert_relative_eq!(v1, v3, max_relative = 1e-12);
    }

    #[test]
    fn polygon_square_center() {
        let sq = rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap();
        assert_relative_eq!(
            phi_polygon(&sq, 1.0, Point2::new(0.5, 0.5)).unwrap(),
            0.0625,
            epsilon = 1e-15
        );
        assert_eq!(phi_polygon(&sq, 1.0, Point2::new(0.5, 0.0)).unwrap(), 0.0);
        let c = PolygonCaricature::new(sq, None, 2.0, 0.1).unwrap();
        assert_eq!(c.r(), 1.0);
        assert!(c.assumptions().holds());
    }

    #[test]
    fn regular_polygon_values() {
        let v = phi_regular_polygon(4, 1.0, Point2::ORIGIN, Point2::ORIGIN).unwrap();
        assert_relative_eq!(v, 0.25 / 64.0, epsilon = 1e-15);
        let hex = build_regular_polygon(6, 1.0, Point2::ORIGIN).unwrap();
        let corner = hex.vertices()[2];
        assert_eq!(phi_regular_polygon(6, 1.0, Point2::ORIGIN, corner).unwrap(), 0.0);
        let p = Point2::new(0.13, -0.21);
        let a = phi_regular_polygon(6, 1.0, Point2::ORIGIN, p).unwrap();
        let b = phi_regular_polygon(6, 1.0, Point2::ORIGIN, p.rotate(PI / 3.0)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert!(phi_regular_polygon(6, 1.0, Point2::ORIGIN, Point2::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn ellipse_values() {
        let d = EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap();
        assert_relative_eq!(phi_ellipse(&d, Point2::ORIGIN).unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(phi_ellipse(&d, Point2::new(1.0, 0.0)).unwrap(), 0.0);
        let d3 = EllipseDomain::disk(Point2::ORIGIN, 3.0).unwrap();
        let p = Point2::new(0.2, 0.1);
        assert_relative_eq!(
            phi_ellipse(&d3, p * 3.0).unwrap(),
            phi_ellipse(&d, p).unwrap() / 3.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn rounded_square_values() {
        // the flat sides sit at l − ε/√2 + ε from the centre
        let l = 1.0;
        let eps = 0.5;
        let rho = l - eps / SQRT_2 + eps;
        let v = phi_rounded_square(l, eps, square_ground_state(l), Point2::ORIGIN).unwrap();
        assert_relative_eq!(v, rho / (rho + eps), epsilon = 1e-14);
        let m = l - eps / SQRT_2;
        let corner = Point2::new(m, m) + Point2::new(1.0, 1.0).normalized() * eps;
        assert_relative_eq!(corner.x, 1.0, epsilon = 1e-15);
        assert_eq!(phi_rounded_square(l, eps, square_ground_state(l), corner).unwrap(), 0.0);
        assert!(phi_rounded_square(l, 2.0, square_ground_state(l), Point2::ORIGIN).is_err());
        assert!(phi_rounded_square(l, eps, square_ground_state(l), Point2::new(1.2, 1.0)).is_err());
    }

    #[test]
    fn rounded_triangle_limits() {
        let t = equilateral(1.0);
        let c = t.centroid();
        let phi_t = |q: Point2| phi_triangle(&t, q).unwrap();
        let small = phi_rounded_triangle(&t, 1e-9, phi_t, c).unwrap();
        assert_relative_eq!(small, phi_t(c), max_relative = 1e-6);
        let below = Point2::new(0.5, -0.05);
        assert_eq!(phi_rounded_triangle(&t, 0.05, phi_t, below).unwrap(), 0.0);
        assert!(phi_rounded_triangle(&t, 0.05, phi_t, Point2::new(0.5, -0.1)).is_err());
        assert!(bisector_triangle(&t, 0.6).is_err());
    }

    #[test]
    fn perturbed_triangle_branches() {
        let t = equilateral(1.0);
        let u = build_perturbed_triangle(&t, 0.5, 0.05).unwrap();
        let at_xeps = phi_triangle(&t, u.x_eps).unwrap();
        let phi_t = |q: Point2| phi_triangle(&t, q).unwrap_or(0.0);
        let far = Point2::new(0.5, 0.4);
        let (v, b) = phi_perturbed_triangle(&u, at_xeps, phi_t, far).unwrap();
        assert_eq!(b, PerturbedBranch::Far);
        assert_eq!(v, phi_t(far));
        let (v, b) = phi_perturbed_triangle(&u, at_xeps, phi_t, u.c3).unwrap();
        assert_eq!((v, b), (0.0, PerturbedBranch::Near));
        let ring = u.bump_centroid() + Point2::new(0.0, 1.5 * 0.05);
        let (near, far) = super::perturbed_triangle_branches(&u, at_xeps, phi_t, ring).unwrap();
        assert!(near.unwrap() > 0.0 && far.unwrap() > 0.0);
    }
}
