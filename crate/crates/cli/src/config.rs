//! JSON experiment configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

pub const CONFIG_VERSION: u32 = 1;

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub domains: BTreeMap<String, DomainSpec>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

/// Grid spacing, either absolute or as a fraction of the domain's diameter.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Resolution {
    H(f64),
    PerDiam(f64),
}

impl Resolution {
    pub fn spacing(&self, diam: f64) -> f64 {
        match *self {
            Resolution::H(h) => h,
            Resolution::PerDiam(n) => diam / n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingModeSpec {
    Corner,
    Neighborhood,
}

/// A domain description; `base` fields name another entry of the `domains` map.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval {
        a: f64,
    },
    Rectangle {
        lo: [f64; 2],
        hi: [f64; 2],
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
        /// `(attach, tip)` pairs.
        #[serde(default)]
        slits: Vec<[[f64; 2]; 2]>,
    },
    Triangle {
        vertices: [[f64; 2]; 3],
    },
    RegularPolygon {
        n: usize,
        l: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    Disk {
        #[serde(default)]
        center: [f64; 2],
        r: f64,
    },
    /// The square `[−l, l]²` with circular corners of radius `eps`.
    RoundedSquare {
        l: f64,
        eps: f64,
    },
    Rounded {
        base: String,
        eps: f64,
        mode: RoundingModeSpec,
    },
    PerturbedTriangle {
        base: String,
        p: f64,
        eps: f64,
    },
    Sawtooth {
        base: String,
        side: usize,
        count: usize,
        height: f64,
    },
    Dilate {
        base: String,
        c: f64,
        center: Option<[f64; 2]>,
    },
    RandomTriangle {
        seed: Option<u64>,
        index: usize,
        min_angle_deg: f64,
    },
    RandomConvex {
        seed: Option<u64>,
        index: usize,
        n: usize,
    },
}

impl DomainSpec {
    pub fn base(&self) -> Option<&str> {
        match self {
            DomainSpec::Rounded { base, .. }
            | DomainSpec::PerturbedTriangle { base, .. }
            | DomainSpec::Sawtooth { base, .. }
            | DomainSpec::Dilate { base, .. } => Some(base),
            _ => None,
        }
    }
}

/// Closed-form profile to compare against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaricatureKind {
    Interval,
    Triangle,
    PerturbedTriangle,
    Polygon,
    RegularPolygon,
    Ellipse,
    RoundedSquare,
    RoundedTriangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub a11: f64,
    #[serde(default)]
    pub a12: f64,
    pub a22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// 1-based eigen index (ignored where not applicable).
    #[serde(default = "one")]
    pub index: usize,
    pub value: f64,
    pub rel_tol: f64,
}

fn one() -> usize {
    1
}
fn twenty() -> usize {
    20
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSpec {
    Geodesic,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenModeSpec {
    Interior,
    Exterior,
}

fn both_modes() -> Vec<GreenModeSpec> {
    vec![GreenModeSpec::Interior, GreenModeSpec::Exterior]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    Eigensolve {
        name: String,
        domain: String,
        resolution: Resolution,
        #[serde(default = "one")]
        k: usize,
        tol: Option<f64>,
        coefficients: Option<Coefficients>,
        #[serde(default)]
        expect: Vec<Expectation>,
        /// Floor for `‖φ_1‖²_∞ μ(U)`.
        sup_norm_floor: Option<f64>,
        #[serde(default = "default_true")]
        image: bool,
    },
    CaricatureCompare {
        name: String,
        domains: Vec<String>,
        caricature: CaricatureKind,
        resolutions: Vec<Resolution>,
        /// Side scale for the generic polygon profile.
        r: Option<f64>,
        max_spread: Option<f64>,
        max_change: Option<f64>,
        /// Pointwise bracket for `φ/Φ` over all nodes.
        ratio_bracket: Option<[f64; 2]>,
        /// Agreement bound for the two perturbed-triangle branches on `2B ∖ B`.
        branch_factor_max: Option<f64>,
    },
    Sandwich {
        name: String,
        inner: String,
        domain: String,
        outer: String,
        resolutions: Vec<Resolution>,
        coefficients: Option<Coefficients>,
        lower_cap: f64,
        upper_cap: f64,
        max_change: f64,
    },
    Separation {
        name: String,
        domains: Vec<String>,
        resolution: Resolution,
        #[serde(default = "ones")]
        ks: Vec<usize>,
        min_product: Option<f64>,
        expect: Option<Expectation>,
        sup_norm_floor: Option<f64>,
    },
    HeatkernelEnvelope {
        name: String,
        domain: String,
        resolution: Resolution,
        #[serde(default = "twenty")]
        k: usize,
        samples: usize,
        #[serde(default = "geodesic")]
        distance: DistanceSpec,
        max_spread: f64,
    },
    GreenCheck {
        name: String,
        eps: Vec<f64>,
        #[serde(default = "both_modes")]
        modes: Vec<GreenModeSpec>,
        radial: usize,
        angular: usize,
        bracket: [f64; 2],
        invariance_tol: f64,
    },
    TubeProfile {
        name: String,
        domains: Vec<String>,
        deltas: Vec<f64>,
    },
    IuRatio {
        name: String,
        domain: String,
        resolution: Resolution,
        #[serde(default = "twenty")]
        k: usize,
        pairs: usize,
        /// Times as multiples of `diam²`.
        t_factors: Vec<f64>,
        /// Bound on `max |ratio − 1|` at the largest time.
        max_deviation: f64,
        #[serde(default)]
        decreasing: bool,
    },
    Monotonicity {
        name: String,
        /// `[inner, outer]` domain names.
        pairs: Vec<[String; 2]>,
        resolution: Resolution,
        #[serde(default = "three")]
        k: usize,
        #[serde(default = "twenty")]
        kernel_k: usize,
        kernel_pairs: usize,
        rel_tol: f64,
    },
}

fn ones() -> Vec<usize> {
    vec![1]
}
fn three() -> usize {
    3
}
fn geodesic() -> DistanceSpec {
    DistanceSpec::Geodesic
}

impl Experiment {
    pub fn name(&self) -> &str {
        match self {
            Experiment::Eigensolve { name, .. }
            | Experiment::CaricatureCompare { name, .. }
            | Experiment::Sandwich { name, .. }
            | Experiment::Separation { name, .. }
            | Experiment::HeatkernelEnvelope { name, .. }
            | Experiment::GreenCheck { name, .. }
            | Experiment::TubeProfile { name, .. }
            | Experiment::IuRatio { name, .. }
            | Experiment::Monotonicity { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Eigensolve { .. } => "eigensolve",
            Experiment::CaricatureCompare { .. } => "caricature_compare",
            Experiment::Sandwich { .. } => "sandwich",
            Experiment::Separation { .. } => "separation",
            Experiment::HeatkernelEnvelope { .. } => "heatkernel_envelope",
            Experiment::GreenCheck { .. } => "green_check",
            Experiment::TubeProfile { .. } => "tube_profile",
            Experiment::IuRatio { .. } => "iu_ratio",
            Experiment::Monotonicity { .. } => "monotonicity",
        }
    }

    /// Every domain name the experiment refers to.
    pub fn domain_refs(&self) -> Vec<&str> {
        match self {
            Experiment::Eigensolve { domain, .. }
            | Experiment::HeatkernelEnvelope { domain, .. }
            | Experiment::IuRatio { domain, .. } => vec![domain],
            Experiment::CaricatureCompare { domains, .. }
            | Experiment::Separation { domains, .. }
            | Experiment::TubeProfile { domains, .. } => domains.iter().map(String::as_str).collect(),
            Experiment::Sandwich { inner, domain, outer, .. } => vec![inner, domain, outer],
            Experiment::Monotonicity { pairs, .. } => pairs
                .iter()
                .flat_map(|p| [p[0].as_str(), p[1].as_str()])
                .collect(),
            Experiment::GreenCheck { .. } => Vec::new(),
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| {
            anyhow::anyhow!("invalid config at line {}, column {}: {e}", e.line(), e.column())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Checks the version, name uniqueness and that every domain reference resolves.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            bail!("unsupported config version {} (expected {CONFIG_VERSION})", self.version);
        }
        let mut names = BTreeSet::new();
        for e in &self.experiments {
            let ok = !e.name().is_empty()
                && e.name().chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
                && !e.name().starts_with('.');
            if !ok {
                bail!("experiment name `{}` must use only [A-Za-z0-9_.-]", e.name());
            }
            if !names.insert(e.name()) {
                bail!("duplicate experiment name `{}`", e.name());
            }
            for d in e.domain_refs() {
                if !self.domains.contains_key(d) {
                    bail!("experiment `{}` refers to unknown domain `{d}`", e.name());
                }
            }
        }
        for (name, spec) in &self.domains {
            // follow base links to catch dangling names and cycles
            let mut seen = BTreeSet::from([name.as_str()]);
            let mut cur = spec;
            while let Some(b) = cur.base() {
                let Some(next) = self.domains.get(b) else {
                    bail!("domain `{name}` refers to unknown base `{b}`");
                };
                if !seen.insert(b) {
                    bail!("domain `{name}` has a cyclic base chain");
                }
                cur = next;
            }
        }
        Ok(())
    }
}
