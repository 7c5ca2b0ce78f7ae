//! Declarative experiment runner for the `drumhead` toolkit.
//!
//! A JSON config names domains and experiments; [`run_config`] builds the
//! domains, runs the experiments with bounded parallelism and writes
//! `results.csv` plus per-experiment images to the output directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod domains;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;

pub use config::{Config, Experiment, Resolution};
pub use output::ResultRow;

use experiments::{run_experiment, ExperimentContext};

/// Options of a single run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
    /// Replace every resolution by `diam/64`.
    pub fast: bool,
    /// Fill the `seconds` column.
    pub timings: bool,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            jobs: None,
            fast: false,
            timings: false,
        }
    }
}

/// Rows of a finished run, in config order.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rows: Vec<ResultRow>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

const FAST: Resolution = Resolution::PerDiam(64.0);

/// Replaces every grid spacing in the config by `diam/64`.
pub fn make_fast(cfg: &mut Config) {
    for e in &mut cfg.experiments {
        match e {
            Experiment::Eigensolve { resolution, .. }
            | Experiment::Separation { resolution, .. }
            | Experiment::HeatkernelEnvelope { resolution, .. }
            | Experiment::IuRatio { resolution, .. }
            | Experiment::Monotonicity { resolution, .. } => *resolution = FAST,
            Experiment::CaricatureCompare { resolutions, .. } | Experiment::Sandwich { resolutions, .. } => {
                resolutions.iter_mut().for_each(|r| *r = FAST)
            }
            Experiment::GreenCheck { .. } | Experiment::TubeProfile { .. } => {}
        }
    }
}

/// Runs a validated config. Nothing is written unless every domain builds.
pub fn run_config(mut cfg: Config, opts: &RunOptions) -> Result<RunSummary> {
    cfg.validate()?;
    if opts.fast {
        make_fast(&mut cfg);
    }
    let domains = domains::build_all(&cfg)?;
    std::fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build()?;
    let per_experiment: Vec<Vec<ResultRow>> = pool.install(|| {
        cfg.experiments
            .par_iter()
            .enumerate()
            .map(|(i, exp)| {
                let out_dir = opts.out.join(exp.name());
                let ctx = ExperimentContext {
                    domains: &domains,
                    seed: cfg.seed.wrapping_add(i as u64),
                    out_dir: &out_dir,
                };
                log::info!("running {} `{}`", exp.kind(), exp.name());
                let start = Instant::now();
                let mut rows = run_experiment(exp, &ctx).unwrap_or_else(|e| {
                    log::error!("experiment `{}` failed: {e:#}", exp.name());
                    vec![ResultRow::error(exp.name())]
                });
                let secs = start.elapsed().as_secs_f64();
                log::info!("finished `{}` in {secs:.1} s", exp.name());
                if opts.timings {
                    rows.iter_mut().for_each(|r| r.seconds = Some(secs));
                }
                rows
            })
            .collect()
    });
    let rows: Vec<ResultRow> = per_experiment.into_iter().flatten().collect();
    output::write_csv(&opts.out.join("results.csv"), &rows)?;
    Ok(RunSummary { rows })
}

/// Loads and runs a config file.
pub fn run_path(path: &Path, opts: &RunOptions) -> Result<RunSummary> {
    run_config(Config::load(path)?, opts)
}
