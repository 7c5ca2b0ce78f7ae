use std::f64::consts::PI;

use super::point::{Point2, Segment};
use super::polygon::PolygonDomain;
use super::{Domain, InnerDiameter, Shape};
use crate::{Error, Result};

/// Fraction of the area within `delta * diam` of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeRatio {
    pub value: f64,
    /// Quadrature cell size, or `None` when computed in closed form.
    pub spacing: Option<f64>,
}

fn polygon_area(v: &[Point2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

/// Keeps the part of a convex polygon with `n · (x - a) >= s`.
fn clip_halfplane(poly: &[Point2], a: Point2, n: Point2, s: f64) -> Vec<Point2> {
    let f = |p: Point2| n.dot(p - a) - s;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            out.push(p.lerp(q, fp / (fp - fq)));
        }
    }
    out
}

/// Area of the inner parallel body `{x : dist(x, complement) >= s}` of a convex polygon.
fn inner_parallel_area(vertices: &[Point2], s: f64) -> f64 {
    let n = vertices.len();
    let mut poly = vertices.to_vec();
    for i in 0..n {
        let e = Segment::new(vertices[i], vertices[(i + 1) % n]);
        poly = clip_halfplane(&poly, e.a, e.inward_normal(), s);
        if poly.len() < 3 {
            return 0.0;
        }
    }
    polygon_area(&poly).max(0.0)
}

const TUBE_CELLS: usize = 1024;

/// `μ{x ∈ V : dist(x, ∂V) <= δ diam_V} / μ(V)`.
pub fn tube_ratio(d: &Domain, delta: f64) -> Result<TubeRatio> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Precondition(format!("delta must lie in [0, 1], got {delta}")));
    }
    if delta == 0.0 {
        return Ok(TubeRatio { value: 0.0, spacing: None });
    }
    let s = delta * d.inner_diameter();
    let area = d.area();
    let exact = |inner: f64| TubeRatio {
        value: (1.0 - inner / area).clamp(0.0, 1.0),
        spacing: None,
    };
    match d.shape() {
        Shape::Polygon(p) if p.is_convex() => return Ok(exact(inner_parallel_area(p.vertices(), s))),
        Shape::Ellipse(e) if e.a == e.b => {
            let r = (e.a - s).max(0.0);
            return Ok(exact(PI * r * r));
        }
        Shape::Rounded(r) => {
            let eps = r.epsilon();
            let core = r.core();
            let inner = if s <= eps {
                let rem = eps - s;
                let n = core.len();
                let per: f64 = if n >= 2 {
                    (0..n).map(|i| core[i].dist(core[(i + 1) % n])).sum()
                } else {
                    0.0
                };
                polygon_area(core) + per * rem + PI * rem * rem
            } else if core.len() >= 3 {
                inner_parallel_area(core, s - eps)
            } else {
                0.0
            };
            return Ok(exact(inner));
        }
        _ => {}
    }
    let (lo, hi) = d.bounding_box();
    let h = (hi.x - lo.x).max(hi.y - lo.y) / TUBE_CELLS as f64;
    let nx = ((hi.x - lo.x) / h).ceil() as usize;
    let ny = ((hi.y - lo.y) / h).ceil() as usize;
    let (mut inside, mut tube) = (0usize, 0usize);
    for j in 0..ny {
        for i in 0..nx {
            let p = Point2::new(lo.x + (i as f64 + 0.5) * h, lo.y + (j as f64 + 0.5) * h);
            if d.contains(p) {
                inside += 1;
                if d.dist_to_boundary(p) <= s {
                    tube += 1;
                }
            }
        }
    }
    if inside == 0 {
        return Err(Error::Resolution("tube quadrature found no interior cells".into()));
    }
    Ok(TubeRatio {
        value: tube as f64 / inside as f64,
        spacing: Some(h),
    })
}

/// Concentric inscribed and circumscribed radii of a convex domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eccentricity {
    pub center: Point2,
    pub a: f64,
    pub big_a: f64,
    pub k: f64,
}

/// Largest inscribed circles of a convex polygon: radius and the optimal centers found.
fn chebyshev_lp(v: &[Point2]) -> (f64, Vec<Point2>) {
    let n = v.len();
    let rows: Vec<(Point2, f64)> = (0..n)
        .map(|i| {
            let e = Segment::new(v[i], v[(i + 1) % n]);
            let nrm = e.inward_normal();
            (nrm, nrm.dot(e.a))
        })
        .collect();
    let scale = v.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    let mut best = f64::NEG_INFINITY;
    let mut centers: Vec<(Point2, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = nalgebra::Matrix3::new(
                    rows[i].0.x, rows[i].0.y, -1.0,
                    rows[j].0.x, rows[j].0.y, -1.0,
                    rows[k].0.x, rows[k].0.y, -1.0,
                );
                let rhs = nalgebra::Vector3::new(rows[i].1, rows[j].1, rows[k].1);
                let Some(sol) = m.lu().solve(&rhs) else { continue };
                let (c, r) = (Point2::new(sol[0], sol[1]), sol[2]);
                if !c.is_finite() || !r.is_finite() {
                    continue;
                }
                if rows.iter().all(|(nm, b)| nm.dot(c) - r >= b - 1e-10 * scale) {
                    centers.push((c, r));
                    best = best.max(r);
                }
            }
        }
    }
    let tol = 1e-10 * scale;
    let opt = centers
        .into_iter()
        .filter(|(_, r)| *r >= best - tol)
        .map(|(c, _)| c)
        .collect();
    (best, opt)
}

pub(crate) fn chebyshev_radius(p: &PolygonDomain) -> f64 {
    if p.is_convex() {
        return chebyshev_lp(p.vertices()).0;
    }
    let (lo, hi) = p.bounding_box();
    let m = 256;
    let mut best: f64 = 0.0;
    for j in 1..m {
        for i in 1..m {
            let q = Point2::new(
                lo.x + (hi.x - lo.x) * i as f64 / m as f64,
                lo.y + (hi.y - lo.y) * j as f64 / m as f64,
            );
            if p.contains(q) {
                best = best.max(p.dist_to_boundary(q));
            }
        }
    }
    best
}

fn farthest(v: &[Point2], x: Point2) -> f64 {
    v.iter().map(|p| p.dist(x)).fold(0.0, f64::max)
}

/// Chebyshev center of a convex point set's hull; ties are broken by the smallest circumradius.
fn convex_eccentricity(v: &[Point2]) -> (Point2, f64, f64) {
    let (r, opt) = chebyshev_lp(v);
    let mut pa = opt[0];
    let mut pb = opt[0];
    let mut far = 0.0;
    for (i, p) in opt.iter().enumerate() {
        for q in &opt[i + 1..] {
            if p.dist(*q) > far {
                far = p.dist(*q);
                pa = *p;
                pb = *q;
            }
        }
    }
    let scale = farthest(v, pa).max(1e-300);
    if far <= 1e-10 * scale {
        return (pa, r, farthest(v, pa));
    }
    // the optimal set is the segment [pa, pb]; the circumradius is convex along it
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let f = |t: f64| farthest(v, pa.lerp(pb, t));
    for _ in 0..200 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let c = pa.lerp(pb, 0.5 * (lo + hi));
    (c, r, farthest(v, c))
}

pub fn eccentricity(d: &Domain) -> Result<Eccentricity> {
    if !d.is_convex() {
        return Err(Error::Precondition("eccentricity needs a convex domain".into()));
    }
    let (center, a, big_a) = match d.shape() {
        Shape::Polygon(p) => convex_eccentricity(p.vertices()),
        Shape::Ellipse(e) => (e.center, e.b, e.a),
        Shape::Rounded(r) => {
            let core = r.core();
            let eps = r.epsilon();
            match core.len() {
                1 => (core[0], eps, eps),
                2 => (core[0].lerp(core[1], 0.5), eps, 0.5 * core[0].dist(core[1]) + eps),
                _ => {
                    let (c, a, big_a) = convex_eccentricity(core);
                    (c, a + eps, big_a + eps)
                }
            }
        }
    };
    Ok(Eccentricity {
        center,
        a,
        big_a,
        k: big_a / a,
    })
}

/// One row of [`convex_tube_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeBoundRow {
    pub delta: f64,
    pub actual: f64,
    pub bound: f64,
    pub margin: f64,
    /// `false` when `delta >= a / (2A)`, where the bound is vacuous.
    pub applicable: bool,
    pub holds: bool,
}

/// Compares `h_V(δ)` with `1 - (1 - 2Aδ/a)^2` for a convex domain.
pub fn convex_tube_bound_check(d: &Domain, deltas: &[f64]) -> Result<Vec<TubeBoundRow>> {
    let ecc = eccentricity(d)?;
    let ratio = 2.0 * ecc.big_a / ecc.a;
    deltas
        .iter()
        .map(|&delta| {
            let t = tube_ratio(d, delta)?;
            let applicable = delta < 1.0 / ratio;
            let bound = if applicable {
                1.0 - (1.0 - ratio * delta).powi(2)
            } else {
                1.0
            };
            // both sides coincide for disks and squares, so allow rounding
            let tol = match t.spacing {
                None => 1e-12,
                Some(h) => 4.0 * h / d.inner_diameter().max(1e-300),
            };
            Ok(TubeBoundRow {
                delta,
                actual: t.value,
                bound,
                margin: bound - t.value,
                applicable,
                holds: t.value <= bound + tol,
            })
        })
        .collect()
}

/// Result of the exterior-ball search.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaReport {
    pub alpha: f64,
    pub per_sample: Vec<f64>,
    pub worst: usize,
    /// Set when `alpha < 1e-3`, i.e. the condition effectively fails.
    pub flagged: bool,
}

fn ball_candidates(d: &Domain, x: Point2, rho: f64) -> Vec<(Point2, Point2)> {
    let mut out = Vec::new();
    match d.shape() {
        Shape::Polygon(p) => {
            let n = p.num_sides();
            for i in 0..n {
                let s = p.side(i);
                if s.dist(x) <= 2.0 * rho {
                    out.push((s.closest_point(x), -s.inward_normal()));
                }
            }
            let v = p.vertices();
            for i in 0..n {
                if v[i].dist(x) > 2.0 * rho {
                    continue;
                }
                if v[i].dist(x) > 0.0 {
                    out.push((v[i], (v[i] - x).normalized()));
                }
                let to_prev = (v[(i + n - 1) % n] - v[i]).normalized();
                let to_next = (v[(i + 1) % n] - v[i]).normalized();
                let bis = to_prev + to_next;
                if bis.norm() > 1e-12 {
                    out.push((v[i], -bis.normalized()));
                }
            }
        }
        Shape::Ellipse(e) => out.push((e.nearest_boundary_point(x), e.outward_normal_near(x))),
        Shape::Rounded(r) => out.push((r.nearest_boundary_point(x), r.outward_normal_near(x))),
    }
    out
}

/// Largest `r / dist(x, ∂U)` such that a ball of radius `r` fits in `B(x, 2 dist) \ U`, minimised over samples.
pub fn exterior_ball_alpha(d: &Domain, samples: &[Point2]) -> Result<AlphaReport> {
    if samples.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut per_sample = Vec::with_capacity(samples.len());
    for &x in samples {
        let rho = d.dist_boundary(x)?;
        let feasible = |c: Point2, r: f64| {
            c.dist(x) + r <= 2.0 * rho * (1.0 + 1e-9)
                && !d.contains(c)
                && d.dist_to_boundary(c) >= r * (1.0 - 1e-9)
        };
        let mut best: f64 = 0.0;
        for (b, u) in ball_candidates(d, x, rho) {
            let (mut lo, mut hi) = (0.0, rho);
            if feasible(b + u * hi, hi) {
                lo = hi;
            }
            while hi - lo > 1e-4 * rho {
                let mid = 0.5 * (lo + hi);
                if feasible(b + u * mid, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            best = best.max(lo);
        }
        per_sample.push(best / rho);
    }
    let (worst, alpha) = per_sample
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, a)| if a < acc.1 { (i, a) } else { acc });
    Ok(AlphaReport {
        alpha,
        per_sample,
        worst,
        flagged: alpha < 1e-3,
    })
}

/// Boundary-sampling approximation of the inner diameter of a nonconvex polygon.
pub(crate) fn sampled_inner_diameter(p: &PolygonDomain) -> InnerDiameter {
    let ediam = {
        let v = p.vertices();
        let mut m: f64 = 0.0;
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                m = m.max(a.dist(*b));
            }
        }
        m
    };
    let coarse = ediam / 512.0;
    let samples = p.boundary_samples(coarse);
    let (best, pa, pb) = max_geodesic_pair(p, &samples, &samples);
    let fine = ediam / 2048.0;
    let dense = p.boundary_samples(fine);
    let near = |c: Point2| -> Vec<Point2> {
        dense
            .iter()
            .copied()
            .filter(|q| q.dist(c) <= 2.0 * coarse)
            .collect()
    };
    let (refined, _, _) = max_geodesic_pair(p, &near(pa), &near(pb));
    InnerDiameter {
        value: best.max(refined),
        spacing: Some(fine),
    }
}

fn max_geodesic_pair(p: &PolygonDomain, xs: &[Point2], ys: &[Point2]) -> (f64, Point2, Point2) {
    let reach: Vec<Vec<f64>> = ys.iter().map(|&y| p.node_reach(y)).collect();
    let graph: Vec<Vec<f64>> = xs.iter().map(|&x| p.node_distances(x)).collect();
    let mut best = (0.0, xs[0], ys[0]);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let e = x.dist(y);
            let g = if p.visible(x, y) {
                e
            } else {
                graph[i]
                    .iter()
                    .zip(&reach[j])
                    .map(|(a, b)| a + b)
                    .fold(f64::INFINITY, f64::min)
            };
            if g.is_finite() && g > best.0 {
                best = (g, x, y);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_triangle, rectangle, EllipseDomain};

    fn unit_square() -> Domain {
        rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into()
    }

    #[test]
    fn square_tube_ratio_is_exact() {
        let t = tube_ratio(&unit_square(), 0.1).unwrap();
        let side = 1.0 - 0.2 * 2f64.sqrt();
        assert!((t.value - (1.0 - side * side)).abs() < 1e-14);
        assert!(t.spacing.is_none());
        assert_eq!(tube_ratio(&unit_square(), 0.0).unwrap().value, 0.0);
        assert_eq!(tube_ratio(&unit_square(), 0.5).unwrap().value, 1.0);
    }

    #[test]
    fn eccentricity_examples() {
        let e = eccentricity(&unit_square()).unwrap();
        assert!((e.a - 0.5).abs() < 1e-12 && (e.big_a - 0.5f64.sqrt()).abs() < 1e-12);
        let r: Domain = rectangle(Point2::ORIGIN, Point2::new(1.0, 2.0)).unwrap().into();
        let e = eccentricity(&r).unwrap();
        assert!((e.a - 0.5).abs() < 1e-12);
        assert!((e.big_a - 5f64.sqrt() / 2.0).abs() < 1e-9);
        assert!((e.k - 5f64.sqrt()).abs() < 1e-8);
        let disk: Domain = EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap().into();
        assert_eq!(eccentricity(&disk).unwrap().k, 1.0);
    }

    #[test]
    fn tube_bound_is_tight_for_square_and_disk() {
        for d in [
            unit_square(),
            EllipseDomain::disk(Point2::ORIGIN, 1.0).unwrap().into(),
        ] {
            for row in convex_tube_bound_check(&d, &[0.0, 0.01, 0.05, 0.1]).unwrap() {
                assert!(row.holds, "{row:?}");
                assert!(row.margin.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convex_alpha_at_least_half() {
        let t: Domain = build_triangle(Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.3, 0.8))
            .unwrap()
            .into();
        let r = exterior_ball_alpha(&t, &[Point2::new(0.4, 0.3), Point2::new(0.5, 0.05)]).unwrap();
        assert!(r.alpha >= 0.5 - 1e-3, "{r:?}");
        assert!(!r.flagged);
    }
}
