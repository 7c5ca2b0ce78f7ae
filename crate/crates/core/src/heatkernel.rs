//! Spectral Dirichlet heat kernels, envelope fits and disk Green functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretize::Grid;
use crate::geometry::{Domain, Point2};
use crate::spectral::Spectrum;
use crate::{Error, Result};

/// Smallest recommended `t λ_K` for truncated kernel evaluations.
pub const KERNEL_TIME_FLOOR: f64 = 0.1;

/// Default threshold `t >= IU_TIME_FACTOR · diam²` for ultracontractivity ratios.
pub const IU_TIME_FACTOR: f64 = 0.5;

/// A truncated kernel value with its truncation indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub t: f64,
    pub k: usize,
    pub value: f64,
    /// `e^{−λ_K t}`.
    pub tail_indicator: f64,
    /// Estimate of the omitted terms: `M² Σ_{j>K} e^{−λ_K t j/K}` with `M` the
    /// largest sup norm among the computed modes and linear eigenvalue growth.
    pub tail_bound: f64,
    /// Set when `t < 0.1 / λ_K`.
    pub below_floor: bool,
}

/// The truncated expansion `Σ_{j<=K} e^{−λ_j t} φ_j(x) φ_j(y)` over a spectrum.
#[derive(Debug, Clone)]
pub struct HeatKernel<'a> {
    spec: &'a Spectrum,
    k: usize,
    sup: f64,
}

impl<'a> HeatKernel<'a> {
    pub fn new(spec: &'a Spectrum, k: usize) -> Result<Self> {
        if k == 0 || k > spec.len() {
            return Err(Error::Precondition(format!(
                "truncation {k} outside 1..={}",
                spec.len()
            )));
        }
        let sup = (1..=k).map(|j| spec.phi(j).max_abs()).fold(0.0, f64::max);
        Ok(Self { spec, k, sup })
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spec
    }

    pub fn truncation(&self) -> usize {
        self.k
    }

    /// Tail estimate at time `t`; see [`KernelEval::tail_bound`].
    pub fn tail_bound(&self, t: f64) -> f64 {
        let a = self.spec.lambda(self.k) * t / self.k as f64;
        self.sup * self.sup * (-a * (self.k + 1) as f64).exp() / (-(-a).exp_m1())
    }

    /// Kernel between nodes `x` and `y`.
    pub fn eval(&self, t: f64, x: usize, y: usize) -> Result<KernelEval> {
        if !(t > 0.0) {
            return Err(Error::Precondition(format!("time must be positive, got {t}")));
        }
        let n = self.spec.grid().len();
        if x >= n || y >= n {
            return Err(Error::Precondition("node index out of range".into()));
        }
        let value = (1..=self.k)
            .map(|j| {
                let f = self.spec.phi(j).values();
                (-self.spec.lambda(j) * t).exp() * f[x] * f[y]
            })
            .sum();
        let lk = self.spec.lambda(self.k);
        Ok(KernelEval {
            t,
            k: self.k,
            value,
            tail_indicator: (-lk * t).exp(),
            tail_bound: self.tail_bound(t),
            below_floor: t * lk < KERNEL_TIME_FLOOR,
        })
    }
}

/// One-off truncated kernel evaluation.
pub fn dirichlet_kernel(spec: &Spectrum, t: f64, x: usize, y: usize, k: usize) -> Result<KernelEval> {
    HeatKernel::new(spec, k)?.eval(t, x, y)
}

/// Domain monotonicity of heat kernels at sampled pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMonotonicityReport {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `p_U − p_V` seen (negative when the inequality holds everywhere with room).
    pub max_excess: f64,
    /// Combined truncation tolerance used at the worst pair.
    pub tolerance: f64,
}

impl KernelMonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `p_U(t,x,y) <= p_V(t,x,y)` at node pairs of `U`'s grid, with `U ⊆ V`
/// on a common lattice and tolerance equal to the sum of the two tail bounds.
pub fn kernel_monotonicity_check(
    spec_u: &Spectrum,
    spec_v: &Spectrum,
    t: f64,
    pairs: &[(usize, usize)],
    k: usize,
) -> Result<KernelMonotonicityReport> {
    let ku = HeatKernel::new(spec_u, k)?;
    let kv = HeatKernel::new(spec_v, k)?;
    let map = spec_u.grid().map_into(spec_v.grid())?;
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut tolerance = 0.0;
    for &(x, y) in pairs {
        let (Some(xv), Some(yv)) = (map[x], map[y]) else {
            return Err(Error::GridMismatch("pair node missing from the outer grid".into()));
        };
        let pu = ku.eval(t, x, y)?;
        let pv = kv.eval(t, xv, yv)?;
        let tol = pu.tail_bound + pv.tail_bound + 1e-12 * pv.value.abs();
        let excess = pu.value - pv.value;
        if excess > max_excess {
            max_excess = excess;
            tolerance = tol;
        }
        if excess > tol {
            violations += 1;
        }
    }
    Ok(KernelMonotonicityReport {
        pairs: pairs.len(),
        violations,
        max_excess,
        tolerance,
    })
}

/// `p_K(t,x,y) / (e^{−λ_1 t} φ_1(x) φ_1(y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IuRatio {
    pub value: f64,
    /// `value − 1`, summed directly from the higher modes.
    pub deviation: f64,
    /// Set when `t < IU_TIME_FACTOR · diam²`.
    pub below_floor: bool,
}

pub fn iu_ratio(spec: &Spectrum, d: &Domain, t: f64, x: usize, y: usize, k: usize) -> Result<IuRatio> {
    let kernel = HeatKernel::new(spec, k)?;
    let f1 = spec.phi(1).values();
    if !(f1[x] > 0.0 && f1[y] > 0.0) {
        return Err(Error::NonPositive(1));
    }
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("time must be positive, got {t}")));
    }
    let l1 = spec.lambda(1);
    let deviation: f64 = (2..=kernel.truncation())
        .map(|j| {
            let f = spec.phi(j).values();
            (-(spec.lambda(j) - l1) * t).exp() * f[x] * f[y] / (f1[x] * f1[y])
        })
        .sum();
    let diam = d.inner_diameter();
    Ok(IuRatio {
        value: 1.0 + deviation,
        deviation,
        below_floor: t < IU_TIME_FACTOR * diam * diam,
    })
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

const STENCIL: [(i64, i64); 8] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)];

/// Grid graph with the 16-neighbour stencil, edges kept only when the segment stays inside the domain.
#[derive(Debug, Clone)]
pub struct GridGeodesic {
    adj: Vec<Vec<(usize, f64)>>,
}

impl GridGeodesic {
    pub fn new(grid: &Grid, d: &Domain) -> Self {
        let n = grid.len();
        let h = grid.h();
        let poly = d.as_polygon().filter(|p| !p.is_convex());
        let mut adj = vec![Vec::new(); n];
        for a in 0..n {
            let (i, j) = grid.lattice(a);
            for &(di, dj) in &STENCIL {
                let Some(b) = grid.index_of(i + di, j + dj) else {
                    continue;
                };
                if let Some(p) = poly {
                    if !p.visible(grid.point(a), grid.point(b)) {
                        continue;
                    }
                }
                let w = h * ((di * di + dj * dj) as f64).sqrt();
                adj[a].push((b, w));
                adj[b].push((a, w));
            }
        }
        Self { adj }
    }

    /// Graph distances from `src`, infinite beyond `radius`.
    pub fn distances(&self, src: usize, radius: f64) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.adj.len()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(HeapItem(0.0, src));
        while let Some(HeapItem(du, u)) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = du + w;
                if nd < dist[v] && nd <= radius {
                    dist[v] = nd;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
        dist
    }
}

/// `h² Σ φ_1²` over nodes within graph-geodesic distance `r` of node `x`.
pub fn phi2_ball_volume(spec: &Spectrum, geo: &GridGeodesic, x: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    let h = spec.grid().h();
    let f = spec.phi(1).values();
    let dist = geo.distances(x, r);
    Ok(h * h
        * dist
            .iter()
            .zip(f)
            .filter(|(d, _)| **d <= r)
            .map(|(_, v)| v * v)
            .sum::<f64>())
}

/// Distance used inside the Gaussian factor of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeDistance {
    Geodesic,
    Euclidean,
}

/// One `(t, x, y)` sample of an envelope fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub t: f64,
    pub x: usize,
    pub y: usize,
}

/// Draws `count` samples with `t` log-uniform in `[0.1/λ_K, 1/λ_1]` and uniform
/// node pairs with `φ_1 > 0`, skipping samples whose truncation tail exceeds 1% of the kernel.
pub fn envelope_samples(spec: &Spectrum, k: usize, count: usize, seed: u64) -> Result<Vec<EnvelopeSample>> {
    let kernel = HeatKernel::new(spec, k)?;
    let lo = KERNEL_TIME_FLOOR / spec.lambda(k);
    let hi = 1.0 / spec.lambda(1);
    let n = spec.grid().len();
    let f1 = spec.phi(1).values();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 200 * count.max(1) {
            return Err(Error::Resolution(format!(
                "only {} of {count} samples have a controlled truncation tail",
                out.len()
            )));
        }
        let t = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        if !(f1[x] > 0.0 && f1[y] > 0.0) {
            continue;
        }
        let p = kernel.eval(t, x, y)?;
        if p.value > 0.0 && p.tail_bound <= 0.01 * p.value {
            out.push(EnvelopeSample { t, x, y });
        }
    }
    Ok(out)
}

/// Fitted two-sided Gaussian envelope constants.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeFit {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub samples: Vec<EnvelopeSample>,
    /// `min_s (c1 · envelope_s − p_s) / p_s`, nonnegative when the upper bound holds.
    pub upper_margin: f64,
    /// `min_s (p_s − c3 · envelope_s) / p_s`, nonnegative when the lower bound holds.
    pub lower_margin: f64,
    /// Index of the sample attaining the largest upper-bound ratio.
    pub worst_sample: usize,
}

impl EnvelopeFit {
    pub fn succeeded(&self) -> bool {
        [self.c1, self.c2, self.c3, self.c4].iter().all(|c| c.is_finite() && *c > 0.0)
    }

    pub fn spread(&self) -> f64 {
        self.c1 / self.c3
    }
}

const GAUSS_SWEEP: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

/// Fits `c1..c4` so that the upper and lower envelopes hold at every sample.
///
/// `c2` is the smallest sweep value whose `c1` is within a factor 2 of the
/// best achievable `c1`; `c4` is the largest sweep value whose `c3` is within
/// a factor 2 of the best achievable `c3`.
pub fn fit_heat_envelope(
    spec: &Spectrum,
    d: &Domain,
    geo: &GridGeodesic,
    samples: &[EnvelopeSample],
    k: usize,
    distance: EnvelopeDistance,
) -> Result<EnvelopeFit> {
    if samples.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let kernel = HeatKernel::new(spec, k)?;
    let g = spec.grid();
    let f1 = spec.phi(1).values();
    // per sample: kernel value, normalised leading term, squared distance over t
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        let p = kernel.eval(s.t, s.x, s.y)?.value;
        let r = s.t.sqrt();
        let vx = phi2_ball_volume(spec, geo, s.x, r)?;
        let vy = phi2_ball_volume(spec, geo, s.y, r)?;
        let lead = f1[s.x] * f1[s.y] / (vx * vy).sqrt();
        let (px, py) = (g.point(s.x), g.point(s.y));
        let dist = match distance {
            EnvelopeDistance::Euclidean => px.dist(py),
            EnvelopeDistance::Geodesic => d.geodesic_dist(px, py)?,
        };
        if !(p > 0.0 && lead > 0.0) {
            return Err(Error::NonPositive(1));
        }
        rows.push((p / lead, dist * dist / s.t));
    }
    let c1_of = |c2: f64| rows.iter().map(|(q, e)| q * (e / c2).exp()).fold(0.0, f64::max);
    let c3_of = |c4: f64| rows.iter().map(|(q, e)| q * (e / c4).exp()).fold(f64::INFINITY, f64::min);
    let best_c1 = c1_of(GAUSS_SWEEP[GAUSS_SWEEP.len() - 1]);
    let c2 = GAUSS_SWEEP
        .iter()
        .copied()
        .find(|&c| c1_of(c) <= 2.0 * best_c1)
        .unwrap_or(GAUSS_SWEEP[GAUSS_SWEEP.len() - 1]);
    let c1 = c1_of(c2);
    let best_c3 = c3_of(GAUSS_SWEEP[0]);
    let c4 = GAUSS_SWEEP
        .iter()
        .rev()
        .copied()
        .find(|&c| c3_of(c) >= 0.5 * best_c3)
        .unwrap_or(GAUSS_SWEEP[0]);
    let c3 = c3_of(c4);
    let mut upper_margin = f64::INFINITY;
    let mut lower_margin = f64::INFINITY;
    let mut worst = (0, f64::NEG_INFINITY);
    for (i, (q, e)) in rows.iter().enumerate() {
        let up = c1 * (-e / c2).exp();
        let lo = c3 * (-e / c4).exp();
        upper_margin = upper_margin.min((up - q) / q);
        lower_margin = lower_margin.min((q - lo) / q);
        let u = q * (e / c2).exp();
        if u > worst.1 {
            worst = (i, u);
        }
    }
    Ok(EnvelopeFit {
        c1,
        c2,
        c3,
        c4,
        samples: samples.to_vec(),
        upper_margin,
        lower_margin,
        worst_sample: worst.0,
    })
}

/// Interior or exterior of the disk `B(0, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenMode {
    Interior,
    Exterior,
}

/// Dirichlet Green function of the disk `B(0, eps)` or its exterior.
///
/// Points on the circle are accepted for `y`; `x = 0` uses the radial limit.
pub fn green_disk(eps: f64, x: Point2, y: Point2, mode: GreenMode) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {eps}")));
    }
    let (nx, ny) = (x.norm(), y.norm());
    let tol = 1e-12 * eps;
    let ok = match mode {
        GreenMode::Interior => nx < eps && ny <= eps + tol,
        GreenMode::Exterior => nx > eps && ny >= eps - tol,
    };
    if !ok {
        return Err(Error::Precondition("points do not lie in the requested region".into()));
    }
    if x.dist(y) == 0.0 {
        return Err(Error::Singular("pole and evaluation point coincide".into()));
    }
    let c = 1.0 / (2.0 * PI);
    if nx == 0.0 {
        return Ok(-c * (ny / eps).ln());
    }
    let xs = x * (eps * eps / (nx * nx));
    Ok(-c * x.dist(y).ln() + c * (nx * y.dist(xs) / eps).ln())
}

/// Green function of the ball `B(0, eps)` in `R^n`, `n >= 3`, for `x != 0`.
pub fn green_ball(eps: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return Err(Error::Precondition("need matching coordinates with n >= 3".into()));
    }
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx == 0.0 {
        return Err(Error::Precondition("pole at the centre is not supported".into()));
    }
    let dxy = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    if dxy == 0.0 {
        return Err(Error::Singular("pole and evaluation point coincide".into()));
    }
    let s = eps * eps / (nx * nx);
    let dstar = x.iter().zip(y).map(|(a, b)| (b - a * s).powi(2)).sum::<f64>().sqrt();
    let nf = n as f64;
    let e = nf - 2.0;
    let omega = PI.powf(nf / 2.0) / gamma_half_integer(nf / 2.0 + 1.0);
    Ok((dxy.powf(-e) - eps.powf(e) / (nx.powf(e) * dstar.powf(e))) / (nf * e * omega))
}

/// `Γ(z)` for positive integer or half-integer `z`.
fn gamma_half_integer(z: f64) -> f64 {
    let (mut acc, mut k) = if z.fract() == 0.0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while k < z - 0.25 {
        acc *= k;
        k += 1.0;
    }
    acc
}

/// Range of `G · ε / ρ` over near-boundary samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenLinearReport {
    pub mode: GreenMode,
    pub eps: f64,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
}

impl GreenLinearReport {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.min >= lo && self.max <= hi
    }
}

/// Near-boundary points with `ρ ∈ (0, 3ε/4]`: `radial` distance levels times `angular` directions.
pub fn green_samples(eps: f64, mode: GreenMode, radial: usize, angular: usize) -> Vec<Point2> {
    let mut out = Vec::with_capacity(radial * angular);
    for i in 1..=radial {
        let rho = 0.75 * eps * i as f64 / radial as f64;
        let r = match mode {
            GreenMode::Interior => eps - rho,
            GreenMode::Exterior => eps + rho,
        };
        for j in 0..angular {
            let th = 2.0 * PI * j as f64 / angular as f64;
            out.push(Point2::new(r * th.cos(), r * th.sin()));
        }
    }
    out
}

/// Pole of the near-boundary Green comparison: the centre (interior) or `2ε e_2` (exterior).
pub fn green_pole(eps: f64, mode: GreenMode) -> Point2 {
    match mode {
        GreenMode::Interior => Point2::ORIGIN,
        GreenMode::Exterior => Point2::new(0.0, 2.0 * eps),
    }
}

/// `min/max` of `G(pole, y) · ε / ρ(y)` over the samples, which must satisfy `ρ <= 3ε/4`.
pub fn green_linear_check(eps: f64, mode: GreenMode, samples: &[Point2]) -> Result<GreenLinearReport> {
    if samples.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let pole = green_pole(eps, mode);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &y in samples {
        let rho = match mode {
            GreenMode::Interior => eps - y.norm(),
            GreenMode::Exterior => y.norm() - eps,
        };
        if !(rho > 0.0 && rho <= 0.75 * eps * (1.0 + 1e-12)) {
            return Err(Error::Precondition(format!("sample at distance {rho} from the circle")));
        }
        let r = green_disk(eps, pole, y, mode)? * eps / rho;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(GreenLinearReport {
        mode,
        eps,
        samples: samples.len(),
        min: lo,
        max: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rectangle;
    use crate::spectral::{dirichlet_spectrum, SolverOptions};
    use approx::assert_relative_eq;

    fn square_spectrum(h: f64, k: usize) -> (Domain, Spectrum) {
        let d: Domain = rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0)).unwrap().into();
        let s = dirichlet_spectrum(&d, h, k, SolverOptions::default()).unwrap();
        (d, s)
    }

    #[test]
    fn kernel_diagonal_and_semigroup() {
        let (_, s) = square_spectrum(1.0 / 16.0, 8);
        let hk = HeatKernel::new(&s, 8).unwrap();
        let c = s.grid().nearest_node(Point2::new(0.5, 0.5)).unwrap();
        let t = 0.05;
        let p = hk.eval(t, c, c).unwrap();
        let f = s.phi(1).values()[c];
        assert!(p.value >= (-s.lambda(1) * t).exp() * f * f);
        // ∫ p(t,x,·) p(t,·,y) = p(2t,x,y) for the truncated sum
        let y = 17;
        let h2 = s.grid().h().powi(2);
        let conv: f64 = (0..s.grid().len())
            .map(|z| hk.eval(t, c, z).unwrap().value * hk.eval(t, z, y).unwrap().value * h2)
            .sum();
        assert_relative_eq!(conv, hk.eval(2.0 * t, c, y).unwrap().value, max_relative = 1e-8);
    }

    #[test]
    fn iu_ratio_tends_to_one() {
        let (d, s) = square_spectrum(1.0 / 16.0, 8);
        let c = s.grid().nearest_node(Point2::new(0.5, 0.5)).unwrap();
        let r = iu_ratio(&s, &d, 4.0, c, c, 8).unwrap();
        assert!(r.deviation >= 0.0 && r.deviation < 1e-30);
        let r = iu_ratio(&s, &d, 0.01, 3, 40, 8).unwrap();
        assert!(r.below_floor);
    }

    #[test]
    fn ball_volume_monotone_and_total() {
        let (d, s) = square_spectrum(1.0 / 16.0, 1);
        let geo = GridGeodesic::new(s.grid(), &d);
        let x = 20;
        let mut prev = 0.0;
        for r in [0.05, 0.1, 0.3, 0.7, 2.0] {
            let v = phi2_ball_volume(&s, &geo, x, r).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert_relative_eq!(prev, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn green_values() {
        let v = green_disk(1.0, Point2::ORIGIN, Point2::new(0.5, 0.0), GreenMode::Interior).unwrap();
        assert_relative_eq!(v, 2f64.ln() / (2.0 * PI), epsilon = 1e-15);
        let x = Point2::new(0.2, -0.3);
        let on = Point2::new(0.6, 0.8);
        assert!(green_disk(1.0, x, on, GreenMode::Interior).unwrap().abs() < 1e-12);
        let y = Point2::new(-0.4, 0.1);
        assert_relative_eq!(
            green_disk(1.0, x, y, GreenMode::Interior).unwrap(),
            green_disk(1.0, y, x, GreenMode::Interior).unwrap(),
            epsilon = 1e-12
        );
        assert!(green_disk(1.0, x, x, GreenMode::Interior).is_err());
        let xe = Point2::new(0.0, 2.0);
        let ye = Point2::new(1.5, -0.3);
        assert_relative_eq!(
            green_disk(1.0, xe, ye, GreenMode::Exterior).unwrap(),
            green_disk(1.0, ye, xe, GreenMode::Exterior).unwrap(),
            epsilon = 1e-12
        );
        assert!(green_disk(1.0, xe, Point2::new(0.0, -1.0), GreenMode::Exterior).unwrap().abs() < 1e-12);
    }

    #[test]
    fn green_ball_vanishes_on_sphere() {
        let x = [0.1, 0.2, -0.3];
        let y = [0.0, 0.6, 0.8];
        assert!(green_ball(1.0, &x, &y).unwrap().abs() < 1e-12);
        let y2 = [0.3, -0.1, 0.2];
        assert_relative_eq!(
            green_ball(1.0, &x, &y2).unwrap(),
            green_ball(1.0, &y2, &x).unwrap(),
            epsilon = 1e-12
        );
        assert_relative_eq!(gamma_half_integer(2.5), 0.75 * PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn green_linear_example() {
        let r = green_linear_check(1.0, GreenMode::Interior, &[Point2::new(0.5, 0.0)]).unwrap();
        assert_relative_eq!(r.min, 2.0 * 2f64.ln() / (2.0 * PI), epsilon = 1e-14);
    }
}
