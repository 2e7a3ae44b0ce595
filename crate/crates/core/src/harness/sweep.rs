//! Parameter grids of experiments with a CSV summary.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::experiment::{parse_pairs, run_experiment, ExperimentConfig, ExperimentReport};
use super::HarnessError;
use crate::css::DistanceResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub cells: Vec<ExperimentConfig>,
    /// Worker threads; `0` lets rayon decide.
    pub workers: usize,
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl SweepConfig {
    /// Same keys as an experiment config, except that any value may be a
    /// comma-separated list; the grid is the cartesian product in key order.
    /// `workers` sets the pool size.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut pairs = parse_pairs(text)?;
        let workers = match pairs.remove("workers") {
            Some(w) => w
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad value {w:?} for \"workers\"")))?,
            None => 0,
        };
        let mut grid: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for (k, v) in &pairs {
            let values = list(v);
            grid = grid
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |value| {
                        let mut c = cell.clone();
                        c.insert(k.clone(), value.clone());
                        c
                    })
                })
                .collect();
        }
        // keys with an empty list leave no cells; so does an empty file
        let cells = if pairs.is_empty() {
            Vec::new()
        } else {
            grid.iter().map(ExperimentConfig::from_pairs).collect::<Result<_, _>>()?
        };
        Ok(Self { cells, workers })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub reports: Vec<ExperimentReport>,
    pub csv: String,
}

/// Runs every cell, concurrently up to `workers`, and returns reports in
/// grid order. A failing cell keeps its partial report.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let reports: Vec<ExperimentReport> = pool.install(|| config.cells.par_iter().map(run_experiment).collect());
    let csv = summary_csv(&reports)?;
    Ok(SweepResult { reports, csv })
}

pub const CSV_HEADER: [&str; 10] = [
    "source",
    "n",
    "d",
    "K",
    "epsilon",
    "rate",
    "delta_min",
    "bound",
    "applicable",
    "errors",
];

/// One row per report. `delta_min` is prefixed with `<=` when only a witness
/// bound is known; missing values are empty.
pub fn summary_csv(reports: &[ExperimentReport]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let delta = r.css.as_ref().and_then(|c| {
            let prefix = match c.distance {
                Some(DistanceResult::UpperBound { .. }) => "<=",
                _ => "",
            };
            c.delta_min.as_ref().map(|d| format!("{prefix}{d}"))
        });
        let errors: Vec<String> = r.errors.iter().map(|e| format!("{}: {}", e.stage, e.message)).collect();
        w.write_record([
            r.config.source.to_string(),
            opt(r.complex.as_ref().map(|c| c.n.to_string())),
            opt(r.complex.as_ref().map(|c| c.d.to_string())),
            opt(r.complex.as_ref().and_then(|c| c.regular_degree).map(|k| k.to_string())),
            opt(r.discrepancy.as_ref().map(|d| crate::ratio_str(&d.epsilon))),
            opt(r.css.as_ref().map(|c| c.rate.clone())),
            opt(delta),
            opt(r.bounds.as_ref().and_then(|b| b.distance_bound).map(|b| format!("{b:e}"))),
            opt(r.bounds.as_ref().map(|b| b.applicable.to_string())),
            errors.join("; "),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
