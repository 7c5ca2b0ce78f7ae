//! Execution of single experiments.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use drumhead::analysis::{
    comparability_report, max_separation, relative_change, sandwich_check, sup_norm_bounds,
    ComparisonReport, Region,
};
use drumhead::caricature::{perturbed_triangle_branches, phi_interval, phi_triangle, CaricatureSpec};
use drumhead::discretize::{assemble_divergence_form, assemble_laplacian, rasterize, CoefficientField};
use drumhead::geometry::{convex_tube_bound_check, PerturbedTriangle};
use drumhead::heatkernel::{
    envelope_samples, green_linear_check, green_samples, iu_ratio, kernel_monotonicity_check,
    fit_heat_envelope, EnvelopeDistance, GreenMode, GridGeodesic,
};
use drumhead::spectral::{
    eigen_monotonicity_check, interval_eigenpairs, smallest_eigenpairs_with, SolverOptions,
};
use drumhead::{Domain, Point2, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{
    CaricatureKind, Coefficients, DistanceSpec, Experiment, GreenModeSpec, Resolution,
};
use crate::domains::{Built, Structure};
use crate::output::{render_field, ResultRow};

/// Everything an experiment needs besides its own definition.
pub struct ExperimentContext<'a> {
    pub domains: &'a BTreeMap<String, Built>,
    pub seed: u64,
    /// Directory for this experiment's images.
    pub out_dir: &'a Path,
}

impl ExperimentContext<'_> {
    fn built(&self, name: &str) -> Result<&Built> {
        self.domains
            .get(name)
            .with_context(|| format!("unknown domain `{name}`"))
    }

    fn planar(&self, name: &str) -> Result<&Domain> {
        self.built(name)?.planar()
    }
}

fn coefficient_field(c: &Coefficients) -> Result<CoefficientField> {
    let tr = 0.5 * (c.a11 + c.a22);
    let disc = (0.25 * (c.a11 - c.a22).powi(2) + c.a12 * c.a12).sqrt();
    let (lo, hi) = (tr - disc, tr + disc);
    ensure!(lo > 0.0, "coefficient matrix is not positive definite");
    let lambda = hi.max(1.0 / lo).max(1.0);
    Ok(CoefficientField::constant(c.a11, c.a12, c.a22, lambda)?)
}

fn solve(
    d: &Domain,
    h: f64,
    k: usize,
    coefficients: Option<&Coefficients>,
    tol: Option<f64>,
) -> Result<Spectrum> {
    let g = rasterize(d, h)?;
    let a = match coefficients {
        None => assemble_laplacian(&g),
        Some(c) => assemble_divergence_form(&g, &coefficient_field(c)?)?,
    };
    let mut opts = SolverOptions::default();
    if let Some(t) = tol {
        opts.tol = t;
    }
    let spec = smallest_eigenpairs_with(&a, Arc::new(g), k, opts)?;
    for w in spec.warnings() {
        log::warn!("{w}");
    }
    Ok(spec)
}

fn interval_spacing(a: f64, res: &Resolution) -> f64 {
    res.spacing(a)
}

/// Runs one experiment; errors abort only this experiment.
pub fn run_experiment(exp: &Experiment, ctx: &ExperimentContext) -> Result<Vec<ResultRow>> {
    match exp {
        Experiment::Eigensolve {
            name,
            domain,
            resolution,
            k,
            tol,
            coefficients,
            expect,
            sup_norm_floor,
            image,
        } => eigensolve(
            name,
            ctx,
            domain,
            resolution,
            *k,
            *tol,
            coefficients.as_ref(),
            expect,
            *sup_norm_floor,
            *image,
        ),
        Experiment::CaricatureCompare {
            name,
            domains,
            caricature,
            resolutions,
            r,
            max_spread,
            max_change,
            ratio_bracket,
            branch_factor_max,
        } => caricature_compare(
            name,
            ctx,
            domains,
            *caricature,
            resolutions,
            *r,
            *max_spread,
            *max_change,
            *ratio_bracket,
            *branch_factor_max,
        ),
        Experiment::Sandwich {
            name,
            inner,
            domain,
            outer,
            resolutions,
            coefficients,
            lower_cap,
            upper_cap,
            max_change,
        } => sandwich(
            name,
            ctx,
            [inner, domain, outer],
            resolutions,
            coefficients.as_ref(),
            *lower_cap,
            *upper_cap,
            *max_change,
        ),
        Experiment::Separation {
            name,
            domains,
            resolution,
            ks,
            min_product,
            expect,
            sup_norm_floor,
        } => separation(name, ctx, domains, resolution, ks, *min_product, expect.as_ref(), *sup_norm_floor),
        Experiment::HeatkernelEnvelope {
            name,
            domain,
            resolution,
            k,
            samples,
            distance,
            max_spread,
        } => envelope(name, ctx, domain, resolution, *k, *samples, *distance, *max_spread),
        Experiment::GreenCheck {
            name,
            eps,
            modes,
            radial,
            angular,
            bracket,
            invariance_tol,
        } => green(name, eps, modes, *radial, *angular, *bracket, *invariance_tol),
        Experiment::TubeProfile { name, domains, deltas } => tube(name, ctx, domains, deltas),
        Experiment::IuRatio {
            name,
            domain,
            resolution,
            k,
            pairs,
            t_factors,
            max_deviation,
            decreasing,
        } => iu(name, ctx, domain, resolution, *k, *pairs, t_factors, *max_deviation, *decreasing),
        Experiment::Monotonicity {
            name,
            pairs,
            resolution,
            k,
            kernel_k,
            kernel_pairs,
            rel_tol,
        } => monotonicity(name, ctx, pairs, resolution, *k, *kernel_k, *kernel_pairs, *rel_tol),
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn check_expect(name: &str, metric: String, value: f64, target: f64, rel_tol: f64, h: Option<f64>) -> ResultRow {
    let w = rel_tol * target.abs();
    ResultRow::checked(name, metric, value, Some(target - w), Some(target + w), h)
}

#[allow(clippy::too_many_arguments)]
fn eigensolve(
    name: &str,
    ctx: &ExperimentContext,
    domain: &str,
    res: &Resolution,
    k: usize,
    tol: Option<f64>,
    coefficients: Option<&Coefficients>,
    expect: &[crate::config::Expectation],
    sup_norm_floor: Option<f64>,
    image: bool,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let (values, h) = match ctx.built(domain)? {
        Built::Interval(a) => {
            ensure!(coefficients.is_none(), "coefficients are not supported on intervals");
            let h = interval_spacing(*a, res);
            let s = interval_eigenpairs(*a, h, k, tol.unwrap_or(1e-10))?;
            (s.eigenvalues, h)
        }
        Built::Planar { domain: d, .. } => {
            let h = res.spacing(d.diameter());
            let s = solve(d, h, k, coefficients, tol)?;
            if let Some(floor) = sup_norm_floor {
                let a = d.area();
                let r = sup_norm_bounds(&s, a, a, 0.0)?;
                rows.push(ResultRow::checked(name, "sup_norm_product", r.lower_product, Some(floor), None, Some(h)));
            }
            if image {
                std::fs::create_dir_all(ctx.out_dir)?;
                render_field(s.grid(), s.phi(1), &ctx.out_dir.join("phi1.pgm"))?;
            }
            (s.eigenvalues().to_vec(), h)
        }
    };
    for (j, lam) in values.iter().enumerate() {
        let idx = j + 1;
        let metric = format!("lambda_{idx}");
        match expect.iter().find(|e| e.index == idx) {
            Some(e) => rows.push(check_expect(name, metric, *lam, e.value, e.rel_tol, Some(h))),
            None => rows.push(ResultRow::info(name, metric, *lam, Some(h))),
        }
    }
    for e in expect {
        ensure!(e.index >= 1 && e.index <= values.len(), "expectation index {} out of range", e.index);
    }
    Ok(rows)
}

/// Ratio statistics of one domain at every resolution.
struct CompareRun {
    h: Vec<f64>,
    reports: Vec<ComparisonReport>,
    /// Spreads on the region kept at the coarsest resolution.
    fixed: Vec<f64>,
}

fn compare_interval(a: f64, resolutions: &[Resolution]) -> Result<CompareRun> {
    let mut run = CompareRun { h: vec![], reports: vec![], fixed: vec![] };
    for res in resolutions {
        let h = interval_spacing(a, res);
        let s = interval_eigenpairs(a, h, 1, 1e-10)?;
        let mut ratios = Vec::with_capacity(s.nodes.len());
        for (x, f) in s.nodes.iter().zip(&s.eigenfunctions[0]) {
            ratios.push(f / phi_interval(a, *x)?);
        }
        ratios.sort_by(f64::total_cmp);
        let q = |p: f64| ratios[((p * ratios.len() as f64).ceil() as usize).clamp(1, ratios.len()) - 1];
        let rep = ComparisonReport {
            region: "all".into(),
            nodes: ratios.len(),
            ratio_min: ratios[0],
            ratio_max: ratios[ratios.len() - 1],
            quantiles: [q(0.01), q(0.5), q(0.99)],
            h,
        };
        run.fixed.push(rep.spread());
        run.h.push(h);
        run.reports.push(rep);
    }
    Ok(run)
}

fn compare_planar(d: &Domain, spec: &CaricatureSpec, resolutions: &[Resolution]) -> Result<CompareRun> {
    let mut run = CompareRun { h: vec![], reports: vec![], fixed: vec![] };
    let mut cut = None;
    for res in resolutions {
        let h = res.spacing(d.diameter());
        let s = solve(d, h, 1, None, None)?;
        let eval = |_: usize, p: Point2| spec.eval(p);
        let rep = comparability_report(s.grid(), s.phi(1), eval, &Region::interior())?;
        let cut = *cut.get_or_insert(2.0 * h);
        let dd = d.clone();
        let fixed_region = Region::all().with_filter("fixed", move |p| dd.dist_to_boundary(p) >= cut);
        let fixed = comparability_report(s.grid(), s.phi(1), eval, &fixed_region)?;
        run.h.push(h);
        run.reports.push(rep);
        run.fixed.push(fixed.spread());
    }
    Ok(run)
}

/// Largest ratio between the two perturbed-triangle branches over samples of `2B ∖ B`.
pub fn branch_factor(u: &PerturbedTriangle) -> Result<f64> {
    let at = phi_triangle(&u.triangle, u.x_eps)?;
    let phi_t = |q: Point2| phi_triangle(&u.triangle, q).unwrap_or(0.0);
    let c = u.bump_centroid();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let (nr, na) = (200, 64);
    for i in 0..nr {
        let r = u.eps * (1.0 + (i as f64 + 0.5) / nr as f64);
        for j in 0..na {
            let th = 2.0 * PI * j as f64 / na as f64;
            let p = c + Point2::new(r * th.cos(), r * th.sin());
            if !u.polygon.contains(p) {
                continue;
            }
            if let (Some(a), Some(b)) = perturbed_triangle_branches(u, at, phi_t, p)? {
                if a > 0.0 && b > 0.0 {
                    lo = lo.min(a / b);
                    hi = hi.max(a / b);
                }
            }
        }
    }
    ensure!(hi > 0.0, "no sample point in 2B \\ B where both branches are defined");
    Ok(hi / lo)
}

#[allow(clippy::too_many_arguments)]
fn caricature_compare(
    name: &str,
    ctx: &ExperimentContext,
    domains: &[String],
    kind: CaricatureKind,
    resolutions: &[Resolution],
    r: Option<f64>,
    max_spread: Option<f64>,
    max_change: Option<f64>,
    ratio_bracket: Option<[f64; 2]>,
    branch_factor_max: Option<f64>,
) -> Result<Vec<ResultRow>> {
    ensure!(!resolutions.is_empty(), "at least one resolution is required");
    let runs: Vec<CompareRun> = domains
        .par_iter()
        .map(|dn| {
            let b = ctx.built(dn)?;
            let run = match b {
                Built::Interval(a) => compare_interval(*a, resolutions),
                Built::Planar { domain, .. } => compare_planar(domain, &b.caricature(kind, r)?, resolutions),
            };
            run.with_context(|| format!("domain `{dn}`"))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let (mut worst_spread, mut worst_change, mut worst_fixed): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (dn, run) in domains.iter().zip(&runs) {
        for (h, rep) in run.h.iter().zip(&run.reports) {
            let h = Some(*h);
            rows.push(ResultRow::info(name, format!("{dn}/ratio_min"), rep.ratio_min, h));
            rows.push(ResultRow::info(name, format!("{dn}/ratio_max"), rep.ratio_max, h));
            rows.push(ResultRow::checked(name, format!("{dn}/spread"), rep.spread(), None, max_spread, h));
            worst_spread = worst_spread.max(rep.spread());
            if let Some([lo, hi]) = ratio_bracket {
                rows.push(ResultRow::checked(name, format!("{dn}/bracket_min"), rep.ratio_min, Some(lo), None, h));
                rows.push(ResultRow::checked(name, format!("{dn}/bracket_max"), rep.ratio_max, None, Some(hi), h));
            }
        }
        for w in 1..run.reports.len() {
            let h = Some(run.h[w]);
            let c = relative_change(run.reports[w - 1].spread(), run.reports[w].spread());
            rows.push(ResultRow::checked(name, format!("{dn}/spread_change"), c, None, max_change, h));
            worst_change = worst_change.max(c);
            let f = relative_change(run.fixed[w - 1], run.fixed[w]);
            rows.push(ResultRow::info(name, format!("{dn}/fixed_region_change"), f, h));
            worst_fixed = worst_fixed.max(f);
        }
    }
    rows.push(ResultRow::checked(name, "max_spread", worst_spread, None, max_spread, None));
    if resolutions.len() > 1 {
        rows.push(ResultRow::checked(name, "max_spread_change", worst_change, None, max_change, None));
        rows.push(ResultRow::info(name, "max_fixed_region_change", worst_fixed, None));
    }
    if let Some(bound) = branch_factor_max {
        for dn in domains {
            let Built::Planar { structure: Structure::Perturbed(u), .. } = ctx.built(dn)? else {
                bail!("branch factor needs a perturbed triangle, `{dn}` is not one");
            };
            rows.push(ResultRow::checked(name, format!("{dn}/branch_factor"), branch_factor(u)?, None, Some(bound), None));
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn sandwich(
    name: &str,
    ctx: &ExperimentContext,
    names: [&String; 3],
    resolutions: &[Resolution],
    coefficients: Option<&Coefficients>,
    lower_cap: f64,
    upper_cap: f64,
    max_change: f64,
) -> Result<Vec<ResultRow>> {
    let [v, u, vc] = names.map(|n| ctx.planar(n));
    let (v, u, vc) = (v?, u?, vc?);
    let mut rows = Vec::new();
    let mut sups = Vec::new();
    for res in resolutions {
        let h = res.spacing(v.diameter());
        let spectra: Vec<Spectrum> = [v, u, vc]
            .par_iter()
            .map(|d| solve(d, h, 1, coefficients, None))
            .collect::<Result<_>>()?;
        let r = sandwich_check(&spectra[0], &spectra[1], &spectra[2], &Region::interior())?;
        rows.push(ResultRow::checked(name, "lower_sup", r.lower_sup, None, Some(lower_cap), Some(h)));
        rows.push(ResultRow::checked(name, "upper_sup", r.upper_sup, None, Some(upper_cap), Some(h)));
        rows.push(ResultRow::checked(name, "unmatched_nodes", r.unmatched as f64, None, Some(0.0), Some(h)));
        sups.push((h, r.lower_sup, r.upper_sup));
    }
    for w in sups.windows(2) {
        let h = Some(w[1].0);
        rows.push(ResultRow::checked(name, "lower_sup_change", relative_change(w[0].1, w[1].1), None, Some(max_change), h));
        rows.push(ResultRow::checked(name, "upper_sup_change", relative_change(w[0].2, w[1].2), None, Some(max_change), h));
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn separation(
    name: &str,
    ctx: &ExperimentContext,
    domains: &[String],
    res: &Resolution,
    ks: &[usize],
    min_product: Option<f64>,
    expect: Option<&crate::config::Expectation>,
    sup_norm_floor: Option<f64>,
) -> Result<Vec<ResultRow>> {
    let kmax = ks.iter().copied().max().context("`ks` must not be empty")?;
    ensure!(ks.iter().all(|&k| k >= 1), "eigen indices start at 1");
    let per_domain: Vec<Vec<ResultRow>> = domains
        .par_iter()
        .map(|dn| {
            let d = ctx.planar(dn)?;
            let h = res.spacing(d.diameter());
            let s = solve(d, h, kmax, None, None).with_context(|| format!("domain `{dn}`"))?;
            let mut rows = Vec::new();
            for &k in ks {
                let r = max_separation(&s, d, k)?;
                let metric = format!("{dn}/product_{k}");
                rows.push(match expect.filter(|e| e.index == k) {
                    Some(e) => check_expect(name, metric, r.product, e.value, e.rel_tol, Some(h)),
                    None => ResultRow::checked(name, metric, r.product, min_product, None, Some(h)),
                });
            }
            if let Some(floor) = sup_norm_floor {
                let r = sup_norm_bounds(&s, d.area(), d.area(), 0.0)?;
                rows.push(ResultRow::checked(name, format!("{dn}/sup_norm_product"), r.lower_product, Some(floor), None, Some(h)));
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ResultRow> = per_domain.into_iter().flatten().collect();
    if let Some(m) = min_product {
        let worst = rows
            .iter()
            .filter(|r| r.metric.contains("/product_"))
            .map(|r| r.value)
            .fold(f64::INFINITY, f64::min);
        rows.push(ResultRow::checked(name, "min_product", worst, Some(m), None, None));
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn envelope(
    name: &str,
    ctx: &ExperimentContext,
    domain: &str,
    res: &Resolution,
    k: usize,
    samples: usize,
    distance: DistanceSpec,
    max_spread: f64,
) -> Result<Vec<ResultRow>> {
    let d = ctx.planar(domain)?;
    let h = res.spacing(d.diameter());
    let s = solve(d, h, k, None, None)?;
    let geo = GridGeodesic::new(s.grid(), d);
    let smp = envelope_samples(&s, k, samples, ctx.seed)?;
    let dist = match distance {
        DistanceSpec::Geodesic => EnvelopeDistance::Geodesic,
        DistanceSpec::Euclidean => EnvelopeDistance::Euclidean,
    };
    let f = fit_heat_envelope(&s, d, &geo, &smp, k, dist)?;
    let h = Some(h);
    Ok(vec![
        ResultRow::info(name, "c1", f.c1, h),
        ResultRow::info(name, "c2", f.c2, h),
        ResultRow::info(name, "c3", f.c3, h),
        ResultRow::info(name, "c4", f.c4, h),
        ResultRow::checked(name, "succeeded", flag(f.succeeded()), Some(1.0), None, h),
        ResultRow::checked(name, "c1_over_c3", f.spread(), None, Some(max_spread), h),
    ])
}

fn green(
    name: &str,
    eps: &[f64],
    modes: &[GreenModeSpec],
    radial: usize,
    angular: usize,
    [lo, hi]: [f64; 2],
    invariance_tol: f64,
) -> Result<Vec<ResultRow>> {
    ensure!(!eps.is_empty(), "`eps` must not be empty");
    let mut rows = Vec::new();
    for mode in modes {
        let (mode, label) = match mode {
            GreenModeSpec::Interior => (GreenMode::Interior, "interior"),
            GreenModeSpec::Exterior => (GreenMode::Exterior, "exterior"),
        };
        let mut reports = Vec::new();
        for &e in eps {
            let r = green_linear_check(e, mode, &green_samples(e, mode, radial, angular))?;
            rows.push(ResultRow::checked(name, format!("{label}/eps={e}/min"), r.min, Some(lo), Some(hi), None));
            rows.push(ResultRow::checked(name, format!("{label}/eps={e}/max"), r.max, Some(lo), Some(hi), None));
            reports.push(r);
        }
        let drift = reports
            .iter()
            .map(|r| (r.min - reports[0].min).abs().max((r.max - reports[0].max).abs()))
            .fold(0.0, f64::max);
        rows.push(ResultRow::checked(name, format!("{label}/eps_drift"), drift, None, Some(invariance_tol), None));
    }
    Ok(rows)
}

fn tube(name: &str, ctx: &ExperimentContext, domains: &[String], deltas: &[f64]) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut violations = 0;
    for dn in domains {
        let d = ctx.planar(dn)?;
        ensure!(d.is_convex(), "domain `{dn}` is not convex");
        for row in convex_tube_bound_check(d, deltas)? {
            rows.push(ResultRow {
                pass: row.holds,
                ..ResultRow::info(name, format!("{dn}/delta={}", row.delta), row.actual, None)
            });
            let last = rows.last_mut().expect("just pushed");
            last.bracket_hi = Some(row.bound);
            if !row.holds {
                violations += 1;
            }
        }
    }
    rows.push(ResultRow::checked(name, "violations", violations as f64, None, Some(0.0), None));
    Ok(rows)
}

fn node_pairs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<(usize, usize)> {
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

#[allow(clippy::too_many_arguments)]
fn iu(
    name: &str,
    ctx: &ExperimentContext,
    domain: &str,
    res: &Resolution,
    k: usize,
    pairs: usize,
    t_factors: &[f64],
    max_deviation: f64,
    decreasing: bool,
) -> Result<Vec<ResultRow>> {
    ensure!(!t_factors.is_empty(), "`t_factors` must not be empty");
    let d = ctx.planar(domain)?;
    let h = res.spacing(d.diameter());
    let s = solve(d, h, k, None, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let pairs = node_pairs(&mut rng, s.grid().len(), pairs);
    let diam = d.inner_diameter();
    let mut factors = t_factors.to_vec();
    factors.sort_by(f64::total_cmp);
    // |ratio − 1| per time, per pair
    let mut devs: Vec<Vec<f64>> = Vec::new();
    for &f in &factors {
        let t = f * diam * diam;
        let row: Vec<f64> = pairs
            .iter()
            .map(|&(x, y)| Ok(iu_ratio(&s, d, t, x, y, k)?.deviation.abs()))
            .collect::<Result<_>>()?;
        devs.push(row);
    }
    let mut rows = Vec::new();
    let last = factors.len() - 1;
    for (i, f) in factors.iter().enumerate() {
        let worst = devs[i].iter().copied().fold(0.0, f64::max);
        let metric = format!("max_deviation@t={f}diam2");
        rows.push(if i == last {
            ResultRow::checked(name, metric, worst, None, Some(max_deviation), Some(h))
        } else {
            ResultRow::info(name, metric, worst, Some(h))
        });
    }
    if decreasing {
        let bad = (0..pairs.len())
            .filter(|&p| (1..factors.len()).any(|i| devs[i][p] > devs[i - 1][p]))
            .count();
        rows.push(ResultRow::checked(name, "non_decreasing_pairs", bad as f64, None, Some(0.0), Some(h)));
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn monotonicity(
    name: &str,
    ctx: &ExperimentContext,
    pairs: &[[String; 2]],
    res: &Resolution,
    k: usize,
    kernel_k: usize,
    kernel_pairs: usize,
    rel_tol: f64,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for [inner, outer] in pairs {
        let (u, v) = (ctx.planar(inner)?, ctx.planar(outer)?);
        let h = res.spacing(v.diameter());
        let kk = k.max(kernel_k);
        let spectra: Vec<Spectrum> = [u, v]
            .par_iter()
            .map(|d| solve(d, h, kk, None, None))
            .collect::<Result<_>>()?;
        let (su, sv) = (&spectra[0], &spectra[1]);
        let label = format!("{inner}<{outer}");
        let rep = eigen_monotonicity_check(su, sv, rel_tol);
        for (j, lu, lv, _) in rep.rows.iter().take(k) {
            rows.push(ResultRow::checked(name, format!("{label}/lambda_ratio_{j}"), lu / lv, Some(1.0 - rel_tol), None, Some(h)));
        }
        let sample = node_pairs(&mut rng, su.grid().len(), kernel_pairs);
        let t = 1.0 / su.lambda(1);
        let km = kernel_monotonicity_check(su, sv, t, &sample, kernel_k)?;
        rows.push(ResultRow::checked(name, format!("{label}/kernel_violations"), km.violations as f64, None, Some(0.0), Some(h)));
    }
    Ok(rows)
}
