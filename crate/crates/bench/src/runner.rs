//! Runs an [`ExperimentSpec`]: one instance per (sweep value, trial), every
//! requested algorithm from the common initial point.

use std::time::Instant;

use rayon::prelude::*;
use trtc_core::channel::build_instance_with_seed;
use trtc_core::mm::{initial_beamformer, run_with};
use trtc_core::system::nats_to_bits;

use crate::error::{BenchError, Result};
use crate::output::ResultRow;
use crate::spec::{Algorithm, ExperimentSpec, SweepPoint};

/// Fails if any requested algorithm is not built into this crate.
pub fn check_capabilities(spec: &ExperimentSpec) -> Result<()> {
    match spec.algorithms.iter().find(|a| !a.is_builtin()) {
        Some(a) => Err(BenchError::Unavailable(a.name())),
        None => Ok(()),
    }
}

/// Instance seed for a trial: the base seed offset by the trial index.
pub fn trial_seed(spec: &ExperimentSpec, trial: usize) -> u64 {
    spec.base.system.seed.wrapping_add(trial as u64)
}

fn run_job(spec: &ExperimentSpec, point: &SweepPoint, trial: usize) -> Result<Vec<ResultRow>> {
    let seed = trial_seed(spec, trial);
    let cfg = point.system.to_config(seed)?;
    let draw = build_instance_with_seed(&cfg, &point.geometry, seed)?;
    let f0 = initial_beamformer(&cfg, &draw.channels);
    spec.algorithms
        .iter()
        .map(|&algo| {
            let start = Instant::now();
            let (iterations, objective) = match algo {
                Algorithm::Mm => {
                    let report = run_with(&cfg, &draw.channels, &f0, &spec.base.solver)?;
                    (report.iterations, report.final_objective())
                }
                other => return Err(BenchError::Unavailable(other.name())),
            };
            let runtime_ms = if spec.record_runtime {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            };
            Ok(ResultRow {
                seed,
                n: cfg.n_elements(),
                g: cfg.n_groups(),
                k: cfg.n_users(),
                axis_value: point.axis_value,
                algorithm: algo.name().to_owned(),
                iterations,
                objective_nats: objective,
                objective_bits: nats_to_bits(objective),
                runtime_ms,
            })
        })
        .collect()
}

/// Rows ordered by (sweep value, trial, algorithm) regardless of which
/// worker finished first.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    check_capabilities(spec)?;
    let points = spec.points()?;
    let jobs: Vec<(&SweepPoint, usize)> = points
        .iter()
        .flat_map(|p| (0..spec.trials).map(move |t| (p, t)))
        .collect();
    let per_job: Vec<Vec<ResultRow>> = jobs
        .par_iter()
        .map(|(p, t)| run_job(spec, p, *t))
        .collect::<Result<_>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

/// Mean objective (nats) per sweep value, for one algorithm, in the order
/// the values first appear.
pub fn mean_by_axis(rows: &[ResultRow], algorithm: &str) -> Vec<(Option<f64>, f64)> {
    let mut out: Vec<(Option<f64>, f64, usize)> = Vec::new();
    for row in rows.iter().filter(|r| r.algorithm == algorithm) {
        match out.iter_mut().find(|(v, _, _)| *v == row.axis_value) {
            Some(entry) => {
                entry.1 += row.objective_nats;
                entry.2 += 1;
            }
            None => out.push((row.axis_value, row.objective_nats, 1)),
        }
    }
    out.into_iter().map(|(v, s, c)| (v, s / c as f64)).collect()
}
