use std::collections::VecDeque;

use crate::geometry::Domain;
use crate::{Error, Point2, Result};

/// Lattice directions in the order east, west, north, south.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

const NONE: u32 = u32::MAX;

/// Identifies the node set of a grid; fields built on grids with equal keys are interchangeable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridKey {
    h: f64,
    len: usize,
    first: (i64, i64),
    last: (i64, i64),
}

/// Interior lattice nodes `(i h, j h)` of a domain.
///
/// All grids with the same spacing share one lattice anchored at the origin, so
/// nested domains rasterised at equal `h` have aligned nodes. Dense indices run
/// row by row (`j` outer, `i` inner).
#[derive(Debug, Clone)]
pub struct Grid {
    h: f64,
    i0: i64,
    j0: i64,
    nx: usize,
    ny: usize,
    lookup: Vec<u32>,
    cells: Vec<(i64, i64)>,
    gaps: Vec<[f64; 4]>,
    links: Vec<[u32; 4]>,
    rho: Vec<f64>,
}

/// Lattice position, boundary gaps and link flags of one node before relabelling.
type RawNode = ((i64, i64), [f64; 4], [bool; 4]);

/// Rasterises `d` at spacing `h`, keeping the largest 4-connected component.
pub fn rasterize(d: &Domain, h: f64) -> Result<Grid> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Resolution(format!("spacing must be positive, got {h}")));
    }
    let diam = d.inner_diameter();
    if h > diam {
        return Err(Error::Resolution(format!(
            "spacing {h} exceeds the inner diameter {diam}"
        )));
    }
    if h > diam / 16.0 {
        log::warn!("spacing {h} is coarser than inner_diameter/16 = {}", diam / 16.0);
    }
    let (lo, hi) = d.bounding_box();
    let i0 = (lo.x / h).floor() as i64;
    let j0 = (lo.y / h).floor() as i64;
    let nx = ((hi.x / h).ceil() as i64 - i0 + 1) as usize;
    let ny = ((hi.y / h).ceil() as i64 - j0 + 1) as usize;
    let at = |i: i64, j: i64| Point2::new(i as f64 * h, j as f64 * h);

    let mut inside = vec![false; nx * ny];
    for jj in 0..ny {
        for ii in 0..nx {
            inside[jj * nx + ii] = d.contains(at(i0 + ii as i64, j0 + jj as i64));
        }
    }
    let is_in = |i: i64, j: i64| -> bool {
        let (ii, jj) = (i - i0, j - j0);
        ii >= 0 && jj >= 0 && (ii as usize) < nx && (jj as usize) < ny && inside[jj as usize * nx + ii as usize]
    };

    // gaps and raw links, keyed by lattice position
    let mut raw: Vec<RawNode> = Vec::new();
    for jj in 0..ny {
        for ii in 0..nx {
            if !inside[jj * nx + ii] {
                continue;
            }
            let (i, j) = (i0 + ii as i64, j0 + jj as i64);
            let p = at(i, j);
            let mut gaps = [h; 4];
            let mut linked = [false; 4];
            for (dir, (dx, dy)) in DIRECTIONS.iter().enumerate() {
                let u = Point2::new(*dx as f64, *dy as f64);
                let hit = d.ray_exit(p, u, h);
                let neighbour = is_in(i + dx, j + dy);
                match hit {
                    Some(t) if t < h * (1.0 - 1e-12) || !neighbour => {
                        gaps[dir] = t.max(1e-8 * h);
                    }
                    _ => linked[dir] = neighbour,
                }
            }
            raw.push(((i, j), gaps, linked));
        }
    }
    if raw.is_empty() {
        return Err(Error::Resolution(format!("no interior lattice nodes at h = {h}")));
    }

    // connected components over links
    let mut pos = vec![NONE; nx * ny];
    for (k, ((i, j), _, _)) in raw.iter().enumerate() {
        pos[(*j - j0) as usize * nx + (*i - i0) as usize] = k as u32;
    }
    let neighbour_raw = |k: usize, dir: usize| -> Option<usize> {
        let ((i, j), _, linked) = &raw[k];
        if !linked[dir] {
            return None;
        }
        let (dx, dy) = DIRECTIONS[dir];
        let idx = pos[(*j + dy - j0) as usize * nx + (*i + dx - i0) as usize];
        (idx != NONE).then_some(idx as usize)
    };
    let mut comp = vec![usize::MAX; raw.len()];
    let mut sizes = Vec::new();
    for start in 0..raw.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        comp[start] = c;
        while let Some(k) = queue.pop_front() {
            size += 1;
            for dir in 0..4 {
                if let Some(m) = neighbour_raw(k, dir) {
                    if comp[m] == usize::MAX {
                        comp[m] = c;
                        queue.push_back(m);
                    }
                }
            }
        }
        sizes.push(size);
    }
    // first component of maximal size (components are numbered by their smallest index)
    let keep = (0..sizes.len()).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
    if sizes.len() > 1 {
        log::warn!(
            "rasterisation at h = {h} has {} components; keeping {} of {} nodes",
            sizes.len(),
            sizes[keep],
            raw.len()
        );
    }

    let mut lookup = vec![NONE; nx * ny];
    let mut cells = Vec::with_capacity(sizes[keep]);
    for (k, (ij, _, _)) in raw.iter().enumerate() {
        if comp[k] == keep {
            lookup[(ij.1 - j0) as usize * nx + (ij.0 - i0) as usize] = cells.len() as u32;
            cells.push(*ij);
        }
    }
    let mut gaps = Vec::with_capacity(cells.len());
    let mut links = Vec::with_capacity(cells.len());
    let mut rho = Vec::with_capacity(cells.len());
    for (k, (ij, g, _)) in raw.iter().enumerate() {
        if comp[k] != keep {
            continue;
        }
        let mut l = [NONE; 4];
        for (dir, slot) in l.iter_mut().enumerate() {
            if let Some(m) = neighbour_raw(k, dir) {
                let (i, j) = raw[m].0;
                *slot = lookup[(j - j0) as usize * nx + (i - i0) as usize];
            }
        }
        gaps.push(*g);
        links.push(l);
        rho.push(d.dist_to_boundary(at(ij.0, ij.1)));
    }
    Ok(Grid {
        h,
        i0,
        j0,
        nx,
        ny,
        lookup,
        cells,
        gaps,
        links,
        rho,
    })
}

impl Grid {
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of interior nodes.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn key(&self) -> GridKey {
        GridKey {
            h: self.h,
            len: self.cells.len(),
            first: self.cells[0],
            last: self.cells[self.cells.len() - 1],
        }
    }

    /// Bounding lattice window `(i0, j0, nx, ny)`.
    pub fn window(&self) -> (i64, i64, usize, usize) {
        (self.i0, self.j0, self.nx, self.ny)
    }

    /// Global lattice coordinates of node `k`.
    pub fn lattice(&self, k: usize) -> (i64, i64) {
        self.cells[k]
    }

    pub fn lattice_point(&self, i: i64, j: i64) -> Point2 {
        Point2::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn point(&self, k: usize) -> Point2 {
        let (i, j) = self.cells[k];
        self.lattice_point(i, j)
    }

    pub fn points(&self) -> impl Iterator<Item = Point2> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }

    /// Dense index of the lattice node `(i, j)` if it is an interior node.
    pub fn index_of(&self, i: i64, j: i64) -> Option<usize> {
        let (ii, jj) = (i - self.i0, j - self.j0);
        if ii < 0 || jj < 0 || ii as usize >= self.nx || jj as usize >= self.ny {
            return None;
        }
        let v = self.lookup[jj as usize * self.nx + ii as usize];
        (v != NONE).then_some(v as usize)
    }

    /// Nearest interior node to `p`, if `p` rounds to one.
    pub fn nearest_node(&self, p: Point2) -> Option<usize> {
        self.index_of((p.x / self.h).round() as i64, (p.y / self.h).round() as i64)
    }

    /// Distances to the boundary (or `h`) along east, west, north, south.
    pub fn gaps(&self, k: usize) -> [f64; 4] {
        self.gaps[k]
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.links[k].iter().all(|&l| l != NONE)
    }

    /// Linked neighbours along east, west, north, south.
    pub fn links(&self, k: usize) -> [Option<usize>; 4] {
        self.links[k].map(|l| (l != NONE).then_some(l as usize))
    }

    /// Diagonal neighbour `(i + di, j + dj)` reachable through two links.
    pub fn diagonal_neighbor(&self, k: usize, di: i64, dj: i64) -> Option<usize> {
        let xdir = if di > 0 { 0 } else { 1 };
        let ydir = if dj > 0 { 2 } else { 3 };
        let l = self.links(k);
        let via_x = l[xdir].and_then(|m| self.links(m)[ydir]);
        let via_y = l[ydir].and_then(|m| self.links(m)[xdir]);
        via_x.or(via_y)
    }

    /// Euclidean distance from node `k` to the boundary.
    pub fn dist_boundary(&self, k: usize) -> f64 {
        self.rho[k]
    }

    /// Whether both grids live on the same lattice (equal spacing).
    pub fn same_lattice(&self, other: &Grid) -> bool {
        self.h == other.h
    }

    /// For every node of `self`, the index of the node at the same lattice position in `other`.
    pub fn map_into(&self, other: &Grid) -> Result<Vec<Option<usize>>> {
        if !self.same_lattice(other) {
            return Err(Error::GridMismatch(format!(
                "spacings {} and {} differ",
                self.h, other.h
            )));
        }
        Ok(self
            .cells
            .iter()
            .map(|&(i, j)| other.index_of(i, j))
            .collect())
    }
}

/// One value per interior node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    key: GridKey,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(g: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                g.len()
            )));
        }
        Ok(Self { key: g.key(), values })
    }

    pub fn constant(g: &Grid, c: f64) -> Self {
        Self {
            key: g.key(),
            values: vec![c; g.len()],
        }
    }

    pub fn from_fn(g: &Grid, f: impl Fn(Point2) -> f64) -> Self {
        Self {
            key: g.key(),
            values: g.points().map(f).collect(),
        }
    }

    pub fn key(&self) -> GridKey {
        self.key
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
