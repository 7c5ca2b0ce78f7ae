use std::f64::consts::PI;
use std::sync::OnceLock;

use super::point::{segments_cross_properly, touch_parameters, Point2, Segment};
use crate::{Error, Result};

/// Polygon given as a counterclockwise boundary walk.
///
/// A slit attached to the boundary is stored inside the walk as a zero-width
/// spike `.., attach, tip, attach, ..`, so its two faces are two separate sides
/// and the tip is a vertex with interior angle `2π`. Side `i` runs from
/// vertex `i` to vertex `i + 1`; the angle at vertex `i` is the one between
/// sides `i - 1` and `i`.
#[derive(Debug, Clone)]
pub struct PolygonDomain {
    vertices: Vec<Point2>,
    slits: Vec<Segment>,
    angles: Vec<f64>,
    scale: f64,
    graph: OnceLock<VisibilityGraph>,
}

#[derive(Debug, Clone)]
struct VisibilityGraph {
    nodes: Vec<Point2>,
    /// all-pairs shortest path lengths between `nodes`
    dist: Vec<Vec<f64>>,
}

/// Distance used by [`PolygonDomain::dist_side`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideMetric {
    Euclidean,
    Geodesic,
}

const ANGLE_TOL: f64 = 1e-9;

fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

fn bbox(v: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
fn ccw_angle(a: Point2, b: Point2) -> f64 {
    let t = a.cross(b).atan2(a.dot(b));
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

impl PolygonDomain {
    /// Builds a polygon from its vertices; clockwise input is reversed.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::Degenerate("non-finite vertex".into()));
        }
        let mut vertices = vertices;
        let area = signed_area(&vertices);
        let (lo, hi) = bbox(&vertices);
        let box_area = (hi.x - lo.x) * (hi.y - lo.y);
        if !(area.abs() >= 1e-12 * box_area) || box_area <= 0.0 {
            return Err(Error::Degenerate(format!(
                "area {area:e} below tolerance for bounding box area {box_area:e}"
            )));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Self::from_walk(vertices, Vec::new())
    }

    fn from_walk(vertices: Vec<Point2>, slits: Vec<Segment>) -> Result<Self> {
        let n = vertices.len();
        let (lo, hi) = bbox(&vertices);
        let scale = lo.dist(hi);
        for i in 0..n {
            let l = vertices[i].dist(vertices[(i + 1) % n]);
            if !(l > 1e-12 * scale) {
                return Err(Error::Degenerate(format!("side {i} has zero length")));
            }
        }
        // weak simplicity: no two sides cross transversally
        for i in 0..n {
            let si = Segment::new(vertices[i], vertices[(i + 1) % n]);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let sj = Segment::new(vertices[j], vertices[(j + 1) % n]);
                if segments_cross_properly(si, sj) {
                    return Err(Error::Degenerate(format!("sides {i} and {j} cross")));
                }
            }
        }
        let angles = (0..n)
            .map(|i| {
                let din = vertices[i] - vertices[(i + n - 1) % n];
                let dout = vertices[(i + 1) % n] - vertices[i];
                let c = din.cross(dout);
                let d = din.dot(dout);
                if c.abs() <= 1e-12 * din.norm() * dout.norm() && d < 0.0 {
                    2.0 * PI
                } else {
                    PI - c.atan2(d)
                }
            })
            .collect();
        Ok(Self {
            vertices,
            slits,
            angles,
            scale,
            graph: OnceLock::new(),
        })
    }

    /// Adds a zero-width slit from a boundary point `attach` to an interior point `tip`.
    pub fn with_slit(&self, attach: Point2, tip: Point2) -> Result<Self> {
        if !self.contains(tip) {
            return Err(Error::Precondition("slit tip must be interior".into()));
        }
        let tol = 1e-12 * self.scale;
        let n = self.vertices.len();
        let side = (0..n)
            .find(|&i| self.side(i).dist(attach) <= tol)
            .ok_or_else(|| Error::Precondition("slit must attach to the boundary".into()))?;
        let slit = Segment::new(attach, tip);
        for i in 0..n {
            if segments_cross_properly(slit, self.side(i)) {
                return Err(Error::Construction(format!("slit crosses side {i}")));
            }
        }
        let mut walk = Vec::with_capacity(n + 3);
        walk.extend_from_slice(&self.vertices[..=side]);
        let start = self.vertices[side];
        let end = self.vertices[(side + 1) % n];
        let at_start = start.dist(attach) <= tol;
        let at_end = end.dist(attach) <= tol;
        if at_start {
            walk.push(tip);
            walk.push(start);
        } else if at_end {
            walk.push(end);
            walk.push(tip);
        } else {
            walk.push(attach);
            walk.push(tip);
            walk.push(attach);
        }
        walk.extend_from_slice(&self.vertices[side + 1..]);
        let mut slits = self.slits.clone();
        slits.push(slit);
        Self::from_walk(walk, slits)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn slits(&self) -> &[Segment] {
        &self.slits
    }

    /// Interior angles, one per vertex of the boundary walk.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn num_sides(&self) -> usize {
        self.vertices.len()
    }

    pub fn side(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn sides(&self) -> Vec<Segment> {
        (0..self.num_sides()).map(|i| self.side(i)).collect()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        self.sides().iter().map(Segment::length).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let v = &self.vertices;
        let n = v.len();
        let a = self.area();
        let mut c = Point2::ORIGIN;
        for i in 0..n {
            let (p, q) = (v[i], v[(i + 1) % n]);
            c = c + (p + q) * p.cross(q);
        }
        c * (1.0 / (6.0 * a))
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Length of the bounding-box diagonal, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_convex(&self) -> bool {
        self.slits.is_empty() && self.angles.iter().all(|&a| a <= PI + ANGLE_TOL)
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        self.angles[i] > PI + ANGLE_TOL
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        self.dist_to_boundary(p) <= 1e-12 * self.scale
    }

    fn winding_number(&self, p: Point2) -> i32 {
        let v = &self.vertices;
        let n = v.len();
        let mut wn = 0;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let side = (b - a).cross(p - a);
            if a.y <= p.y {
                if b.y > p.y && side > 0.0 {
                    wn += 1;
                }
            } else if b.y <= p.y && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Open-interior membership; boundary and slit points are exterior.
    pub fn contains(&self, p: Point2) -> bool {
        !self.on_boundary(p) && self.winding_number(p) != 0
    }

    /// Membership in the closed domain.
    pub fn contains_closure(&self, p: Point2) -> bool {
        self.on_boundary(p) || self.winding_number(p) != 0
    }

    /// Unsigned distance from any point to the boundary (slits included).
    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.side(i).dist(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closest boundary point and the index of the side it lies on.
    pub fn nearest_boundary_point(&self, p: Point2) -> (Point2, usize) {
        let mut best = (p, 0, f64::INFINITY);
        for i in 0..self.num_sides() {
            let q = self.side(i).closest_point(p);
            let d = q.dist(p);
            if d < best.2 {
                best = (q, i, d);
            }
        }
        (best.0, best.1)
    }

    /// First boundary hit along `p + t * dir` (unit `dir`) with `0 < t <= t_max`.
    pub fn ray_exit(&self, p: Point2, dir: Point2, t_max: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.num_sides() {
            if let Some(t) = self.side(i).ray_hit(p, dir, 0.0) {
                if t > 0.0 && t <= t_max * (1.0 + 1e-12) && best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
        }
        best.map(|t| t.min(t_max))
    }

    /// True if the direction `d` (pointing away from vertex `i`) lies in the interior wedge at `i`.
    fn in_wedge(&self, i: usize, d: Point2) -> bool {
        let n = self.vertices.len();
        let dout = self.vertices[(i + 1) % n] - self.vertices[i];
        let a = ccw_angle(dout, d);
        let alpha = self.angles[i];
        a <= alpha + ANGLE_TOL || a >= 2.0 * PI - ANGLE_TOL
    }

    fn vertices_at(&self, p: Point2) -> impl Iterator<Item = usize> + '_ {
        let tol = 1e-10 * self.scale;
        (0..self.vertices.len()).filter(move |&i| self.vertices[i].dist(p) <= tol)
    }

    /// Whether the segment `pq` is a path in the domain, touching but never crossing the boundary.
    pub fn visible(&self, p: Point2, q: Point2) -> bool {
        let len = p.dist(q);
        if len <= 1e-14 * self.scale {
            return true;
        }
        let seg = Segment::new(p, q);
        let n = self.vertices.len();
        let mut ts = vec![0.0, 1.0];
        for i in 0..n {
            let s = self.side(i);
            if segments_cross_properly(seg, s) {
                return false;
            }
            touch_parameters(seg, s, &mut ts);
        }
        let d = (q - p) * (1.0 / len);
        // passing through, starting or ending at a vertex must stay inside one wedge
        let vtol = 1e-10;
        for i in 0..n {
            let v = self.vertices[i];
            let t = (v - p).dot(q - p) / (len * len);
            if !(-vtol..=1.0 + vtol).contains(&t) || seg.dist(v) > 1e-10 * self.scale {
                continue;
            }
            if self.vertices_at(v).next().is_none() {
                continue;
            }
            let ok = if t <= vtol {
                self.vertices_at(v).any(|j| self.in_wedge(j, d))
            } else if t >= 1.0 - vtol {
                self.vertices_at(v).any(|j| self.in_wedge(j, -d))
            } else {
                self.vertices_at(v)
                    .any(|j| self.in_wedge(j, d) && self.in_wedge(j, -d))
            };
            if !ok {
                return false;
            }
        }
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            if w[1] - w[0] > 1e-9 {
                let m = p.lerp(q, 0.5 * (w[0] + w[1]));
                if !self.contains_closure(m) {
                    return false;
                }
            }
        }
        true
    }

    fn graph(&self) -> &VisibilityGraph {
        self.graph.get_or_init(|| {
            let mut nodes: Vec<Point2> = Vec::new();
            for i in 0..self.vertices.len() {
                if self.is_reflex(i)
                    && !nodes
                        .iter()
                        .any(|q| q.dist(self.vertices[i]) <= 1e-12 * self.scale)
                {
                    nodes.push(self.vertices[i]);
                }
            }
            let m = nodes.len();
            let mut dist = vec![vec![f64::INFINITY; m]; m];
            for a in 0..m {
                dist[a][a] = 0.0;
                for b in a + 1..m {
                    if self.visible(nodes[a], nodes[b]) {
                        let d = nodes[a].dist(nodes[b]);
                        dist[a][b] = d;
                        dist[b][a] = d;
                    }
                }
            }
            for k in 0..m {
                for a in 0..m {
                    for b in 0..m {
                        let via = dist[a][k] + dist[k][b];
                        if via < dist[a][b] {
                            dist[a][b] = via;
                        }
                    }
                }
            }
            VisibilityGraph { nodes, dist }
        })
    }

    /// Geodesic distance from `p` to every reflex node of the visibility graph.
    pub(crate) fn node_distances(&self, p: Point2) -> Vec<f64> {
        let g = self.graph();
        let m = g.nodes.len();
        let direct: Vec<f64> = g
            .nodes
            .iter()
            .map(|&a| {
                if self.visible(p, a) {
                    p.dist(a)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        (0..m)
            .map(|b| {
                (0..m)
                    .map(|a| direct[a] + g.dist[a][b])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Straight-line reach from each graph node to `q` (infinite when not visible).
    pub(crate) fn node_reach(&self, q: Point2) -> Vec<f64> {
        self.graph()
            .nodes
            .iter()
            .map(|&b| if self.visible(b, q) { b.dist(q) } else { f64::INFINITY })
            .collect()
    }

    /// Length of the shortest path between `p` and `q` inside the domain.
    pub fn geodesic_dist(&self, p: Point2, q: Point2) -> Result<f64> {
        if self.is_convex() || self.visible(p, q) {
            return Ok(p.dist(q));
        }
        let dp = self.node_distances(p);
        let g = self.graph();
        let best = g
            .nodes
            .iter()
            .zip(&dp)
            .filter(|(_, d)| d.is_finite())
            .filter(|(b, _)| self.visible(**b, q))
            .map(|(b, d)| d + b.dist(q))
            .fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Internal("points are not connected inside the domain".into()))
        }
    }

    /// Shortest straight leg from `v` onto side `i`, arriving from the interior side.
    fn leg_to_side(&self, i: usize, v: Point2) -> f64 {
        let n = self.vertices.len();
        let s = self.side(i);
        let mut best = f64::INFINITY;
        let t = s.project(v);
        let foot = s.a.lerp(s.b, t);
        let tol = 1e-12 * self.scale;
        if t > 0.0 && t < 1.0 {
            let side_ok = (v - foot).dot(s.inward_normal()) >= -tol;
            if side_ok && self.visible(v, foot) {
                best = v.dist(foot);
            }
        }
        for (k, e) in [(i % n, s.a), ((i + 1) % n, s.b)] {
            let d = v - e;
            let r = d.norm();
            if r <= tol {
                return 0.0;
            }
            if self.in_wedge(k, d * (1.0 / r)) && self.visible(v, e) {
                best = best.min(r);
            }
        }
        best
    }

    /// Distance from interior point `p` to side `i`.
    pub fn dist_side(&self, i: usize, p: Point2, metric: SideMetric) -> Result<f64> {
        if i >= self.num_sides() {
            return Err(Error::InvalidSide(i));
        }
        if !self.contains(p) {
            return Err(Error::Precondition("point must be interior".into()));
        }
        if metric == SideMetric::Euclidean || self.is_convex() {
            return Ok(self.side(i).dist(p));
        }
        let mut best = self.leg_to_side(i, p);
        let g = self.graph();
        let dp = self.node_distances(p);
        for (node, d) in g.nodes.iter().zip(&dp) {
            if d.is_finite() && *d < best {
                best = best.min(d + self.leg_to_side(i, *node));
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Internal("side unreachable".into()))
        }
    }

    /// Distances from interior point `p` to every side, sharing one graph search.
    pub fn dist_sides(&self, p: Point2, metric: SideMetric) -> Result<Vec<f64>> {
        if !self.contains(p) {
            return Err(Error::Precondition("point must be interior".into()));
        }
        let n = self.num_sides();
        if metric == SideMetric::Euclidean || self.is_convex() {
            return Ok((0..n).map(|i| self.side(i).dist(p)).collect());
        }
        let g = self.graph();
        let dp = self.node_distances(p);
        (0..n)
            .map(|i| {
                let mut best = self.leg_to_side(i, p);
                for (node, d) in g.nodes.iter().zip(&dp) {
                    if d.is_finite() && *d < best {
                        best = best.min(d + self.leg_to_side(i, *node));
                    }
                }
                if best.is_finite() {
                    Ok(best)
                } else {
                    Err(Error::Internal("side unreachable".into()))
                }
            })
            .collect()
    }

    /// Homothety about `center`.
    pub fn dilate(&self, c: f64, center: Point2) -> Result<Self> {
        let map = |p: Point2| center + (p - center) * c;
        let vertices = self.vertices.iter().map(|&p| map(p)).collect();
        let slits = self
            .slits
            .iter()
            .map(|s| Segment::new(map(s.a), map(s.b)))
            .collect();
        Self::from_walk(vertices, slits)
    }

    /// Points on the boundary walk spaced at most `spacing` apart, vertices included.
    pub fn boundary_samples(&self, spacing: f64) -> Vec<Point2> {
        let mut out = Vec::new();
        for s in self.sides() {
            let m = (s.length() / spacing).ceil().max(1.0) as usize;
            for k in 0..m {
                out.push(s.a.lerp(s.b, k as f64 / m as f64));
            }
        }
        out
    }
}
