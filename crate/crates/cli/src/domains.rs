//! Turning domain specs into geometry.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use drumhead::caricature::{CaricatureSpec, PolygonCaricature};
use drumhead::geometry::{
    build_perturbed_triangle, build_regular_polygon, build_sawtooth_side, build_triangle,
    random_convex_polygon, random_triangle, rectangle, EllipseDomain, PerturbedTriangle,
    RoundedDomain, RoundingMode,
};
use drumhead::{Domain, Point2, PolygonDomain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CaricatureKind, Config, DomainSpec, RoundingModeSpec};

fn pt(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

/// Extra structure some caricatures need beyond the shape itself.
#[derive(Debug, Clone)]
pub enum Structure {
    None,
    Regular { n: usize, l: f64, center: Point2 },
    Perturbed(Box<PerturbedTriangle>),
    RoundedSquare { l: f64, eps: f64 },
    RoundedTriangle { triangle: PolygonDomain, eps: f64 },
}

/// A resolved domain: either the interval `(0, a)` or a planar shape.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Built {
    Interval(f64),
    Planar { domain: Domain, structure: Structure },
}

impl Built {
    pub fn planar(&self) -> Result<&Domain> {
        match self {
            Built::Planar { domain, .. } => Ok(domain),
            Built::Interval(_) => bail!("an interval is not a planar domain"),
        }
    }

    /// The caricature of the requested kind for this domain.
    pub fn caricature(&self, kind: CaricatureKind, r: Option<f64>) -> Result<CaricatureSpec> {
        let structure = match self {
            Built::Interval(a) => {
                return match kind {
                    CaricatureKind::Interval => Ok(CaricatureSpec::Interval { a: *a }),
                    _ => bail!("interval domains only support the interval caricature"),
                }
            }
            Built::Planar { structure, .. } => structure,
        };
        let domain = self.planar()?;
        let poly = || {
            domain
                .as_polygon()
                .cloned()
                .ok_or_else(|| anyhow!("{kind:?} caricature needs a polygonal domain"))
        };
        Ok(match (kind, structure) {
            (CaricatureKind::Triangle, _) => CaricatureSpec::Triangle(poly()?),
            (CaricatureKind::Polygon, _) => {
                CaricatureSpec::Polygon(Box::new(PolygonCaricature::new(poly()?, r, f64::INFINITY, 0.0)?))
            }
            (CaricatureKind::RegularPolygon, Structure::Regular { n, l, center }) => {
                CaricatureSpec::RegularPolygon { n: *n, l: *l, center: *center }
            }
            (CaricatureKind::PerturbedTriangle, Structure::Perturbed(u)) => {
                CaricatureSpec::PerturbedTriangle(u.clone())
            }
            (CaricatureKind::Ellipse, _) => match domain.shape() {
                drumhead::geometry::Shape::Ellipse(e) => CaricatureSpec::Ellipse(*e),
                _ => bail!("ellipse caricature needs an ellipse domain"),
            },
            (CaricatureKind::RoundedSquare, Structure::RoundedSquare { l, eps }) => {
                CaricatureSpec::RoundedSquare { l: *l, eps: *eps }
            }
            (CaricatureKind::RoundedTriangle, Structure::RoundedTriangle { triangle, eps }) => {
                CaricatureSpec::RoundedTriangle { triangle: triangle.clone(), eps: *eps }
            }
            (k, _) => bail!("domain lacks the structure required by the {k:?} caricature"),
        })
    }
}

/// Resolves every named domain of a config, following `base` links.
pub fn build_all(cfg: &Config) -> Result<BTreeMap<String, Built>> {
    let mut out = BTreeMap::new();
    for name in cfg.domains.keys() {
        resolve(cfg, name, &mut out)?;
    }
    Ok(out)
}

fn resolve(cfg: &Config, name: &str, done: &mut BTreeMap<String, Built>) -> Result<Built> {
    if let Some(b) = done.get(name) {
        return Ok(b.clone());
    }
    let spec = cfg
        .domains
        .get(name)
        .ok_or_else(|| anyhow!("unknown domain `{name}`"))?;
    let built = build(cfg, spec, done).with_context(|| format!("building domain `{name}`"))?;
    done.insert(name.to_string(), built.clone());
    Ok(built)
}

fn plain(d: impl Into<Domain>) -> Built {
    Built::Planar {
        domain: d.into(),
        structure: Structure::None,
    }
}

fn base_polygon(cfg: &Config, base: &str, done: &mut BTreeMap<String, Built>) -> Result<PolygonDomain> {
    resolve(cfg, base, done)?
        .planar()?
        .as_polygon()
        .cloned()
        .ok_or_else(|| anyhow!("base `{base}` must be a polygon"))
}

fn build(cfg: &Config, spec: &DomainSpec, done: &mut BTreeMap<String, Built>) -> Result<Built> {
    Ok(match spec {
        DomainSpec::Interval { a } => {
            if !(*a > 0.0) {
                bail!("interval length must be positive");
            }
            Built::Interval(*a)
        }
        DomainSpec::Rectangle { lo, hi } => plain(rectangle(pt(*lo), pt(*hi))?),
        DomainSpec::Polygon { vertices, slits } => {
            let mut p = PolygonDomain::new(vertices.iter().map(|v| pt(*v)).collect())?;
            for s in slits {
                p = p.with_slit(pt(s[0]), pt(s[1]))?;
            }
            plain(p)
        }
        DomainSpec::Triangle { vertices } => {
            plain(build_triangle(pt(vertices[0]), pt(vertices[1]), pt(vertices[2]))?)
        }
        DomainSpec::RegularPolygon { n, l, center } => Built::Planar {
            domain: build_regular_polygon(*n, *l, pt(*center))?.into(),
            structure: Structure::Regular { n: *n, l: *l, center: pt(*center) },
        },
        DomainSpec::Ellipse { center, a, b, rotation } => {
            plain(EllipseDomain::new(pt(*center), *a, *b, *rotation)?)
        }
        DomainSpec::Disk { center, r } => plain(EllipseDomain::disk(pt(*center), *r)?),
        DomainSpec::RoundedSquare { l, eps } => {
            let sq = rectangle(Point2::new(-l, -l), Point2::new(*l, *l))?;
            Built::Planar {
                domain: RoundedDomain::new(sq, RoundingMode::CornerQuarterCircles, *eps)?.into(),
                structure: Structure::RoundedSquare { l: *l, eps: *eps },
            }
        }
        DomainSpec::Rounded { base, eps, mode } => {
            let p = base_polygon(cfg, base, done)?;
            let mode = match mode {
                RoundingModeSpec::Corner => RoundingMode::CornerQuarterCircles,
                RoundingModeSpec::Neighborhood => RoundingMode::EpsilonNeighborhood,
            };
            let structure = if mode == RoundingMode::EpsilonNeighborhood && p.num_sides() == 3 {
                Structure::RoundedTriangle { triangle: p.clone(), eps: *eps }
            } else {
                Structure::None
            };
            Built::Planar {
                domain: RoundedDomain::new(p, mode, *eps)?.into(),
                structure,
            }
        }
        DomainSpec::PerturbedTriangle { base, p, eps } => {
            let t = base_polygon(cfg, base, done)?;
            let u = build_perturbed_triangle(&t, *p, *eps)?;
            Built::Planar {
                domain: u.polygon.clone().into(),
                structure: Structure::Perturbed(Box::new(u)),
            }
        }
        DomainSpec::Sawtooth { base, side, count, height } => {
            let t = base_polygon(cfg, base, done)?;
            plain(build_sawtooth_side(&t, *side, *count, *height)?)
        }
        DomainSpec::Dilate { base, c, center } => {
            let b = resolve(cfg, base, done)?;
            let d = b.planar()?;
            let center = center.map(pt).unwrap_or_else(|| d.interior_reference_point());
            plain(d.dilate(*c, center)?)
        }
        DomainSpec::RandomTriangle { seed, index, min_angle_deg } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(cfg.seed));
            let mut t = random_triangle(&mut rng, min_angle_deg.to_radians())?;
            for _ in 0..*index {
                t = random_triangle(&mut rng, min_angle_deg.to_radians())?;
            }
            plain(t)
        }
        DomainSpec::RandomConvex { seed, index, n } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(cfg.seed));
            let mut p = random_convex_polygon(&mut rng, *n)?;
            for _ in 0..*index {
                p = random_convex_polygon(&mut rng, *n)?;
            }
            plain(p)
        }
    })
}
