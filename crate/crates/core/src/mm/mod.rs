//! Solver-free max-min beamforming by element-wise minorization-maximization.
//!
//! Each outer iteration refreshes the WMMSE auxiliaries and then sweeps the
//! elements. On element `n` the group minima of the local variational rates
//! are smoothed by log-sum-exp, minorized by an isotropic quadratic whose
//! maximizer over the power ball is closed form, and the resulting
//! fixed-point map is accelerated by squared extrapolation with a
//! backtracking safeguard on the true objective.

mod accel;
mod element;
mod surrogate;

use std::time::Instant;

pub use accel::{
    accelerate, accelerated_element_update, mm_fixed_point, ElementUpdate, UpdateOutcome,
};
pub use element::{element_coeffs, soft_min, soft_min_weights, ElementSubproblem, UserTerm};
pub use surrogate::{
    curvature_bound, solve_subproblem, surrogate_coeffs, GroupSurrogate, SubproblemCase,
    SubproblemSolution, SurrogateCoeffs,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{
    first_violation, objective, Beamformer, ChannelSet, SystemConfig, DEFAULT_FEASIBILITY_TOL,
};
use crate::wmmse::{quad_coeffs, AuxiliaryState};

/// Smoothing parameter used for single-user groups, where the log-sum-exp
/// is exact for every positive value.
pub const SINGLETON_MU: f64 = 1e-12;

/// Log-sum-exp smoothing schedule.
///
/// `mu_g = ln|K_g| / bias`, so the smoothed group rate sits at most `bias`
/// nats below the true minimum. With `doublings > 0` the parameter is
/// doubled after every outer iteration, at most `doublings` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Smoothing {
    pub bias: f64,
    pub doublings: u32,
}

impl Default for Smoothing {
    fn default() -> Self {
        Self {
            bias: 0.01,
            doublings: 0,
        }
    }
}

impl Smoothing {
    /// Per-group parameters for outer iteration `iter` (0-based).
    pub fn mu(&self, cfg: &SystemConfig, iter: usize) -> Vec<f64> {
        let boost = 2f64.powi(self.doublings.min(iter as u32) as i32);
        (0..cfg.n_groups())
            .map(|g| {
                let size = cfg.members(g).len();
                if size == 1 {
                    SINGLETON_MU
                } else {
                    (size as f64).ln() / self.bias * boost
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MmOptions {
    pub smoothing: Smoothing,
    pub max_backtracks: usize,
}

impl Default for MmOptions {
    fn default() -> Self {
        Self {
            smoothing: Smoothing::default(),
            max_backtracks: 20,
        }
    }
}

impl MmOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.smoothing.bias > 0.0 && self.smoothing.bias.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "smoothing bias must be positive, got {}",
                self.smoothing.bias
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    /// Objective (nats) at the initial point followed by one entry per
    /// outer iteration.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: f64,
    pub final_f: Beamformer,
}

impl SolverReport {
    pub fn final_objective(&self) -> f64 {
        *self
            .objective_trace
            .last()
            .expect("trace holds the initial value")
    }
}

/// Common starting point: every element radiates `P_t` split evenly over
/// the groups, co-phased with the strongest user's channel.
pub fn initial_beamformer(cfg: &SystemConfig, ch: &ChannelSet) -> Beamformer {
    let strongest = (0..ch.n_users())
        .max_by(|&a, &b| {
            let pa: f64 = ch.channel(a).iter().map(Complex64::norm_sqr).sum();
            let pb: f64 = ch.channel(b).iter().map(Complex64::norm_sqr).sum();
            pa.total_cmp(&pb)
        })
        .unwrap_or(0);
    let amp = (cfg.power_budget() / cfg.n_groups() as f64).sqrt();
    let column: Vec<Complex64> = (0..cfg.n_elements())
        .map(|n| {
            let h = ch.channel(strongest)[n];
            if h.norm() > 0.0 {
                h / h.norm() * amp
            } else {
                Complex64::new(amp, 0.0)
            }
        })
        .collect();
    let data = (0..cfg.n_groups())
        .flat_map(|_| column.iter().copied())
        .collect();
    Beamformer::from_vec(cfg.n_elements(), cfg.n_groups(), data).expect("shape matches config")
}

/// Runs the accelerated MM algorithm with default options.
pub fn run(cfg: &SystemConfig, ch: &ChannelSet, f0: &Beamformer) -> Result<SolverReport> {
    run_with(cfg, ch, f0, &MmOptions::default())
}

pub fn run_with(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f0: &Beamformer,
    opts: &MmOptions,
) -> Result<SolverReport> {
    opts.validate()?;
    ch.check_against(cfg)?;
    if f0.n_elements() != cfg.n_elements() || f0.n_groups() != cfg.n_groups() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_elements() * cfg.n_groups(),
            got: f0.as_slice().len(),
        });
    }
    if let Some(err) = first_violation(cfg, f0, DEFAULT_FEASIBILITY_TOL) {
        return Err(err);
    }

    let start = Instant::now();
    let mut f = f0.clone();
    let mut trace = vec![objective(cfg, ch, &f)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_outer_iters() {
        let aux = AuxiliaryState::optimal(cfg, ch, &f);
        let quad = quad_coeffs(cfg, ch, &aux)?;
        let mu = opts.smoothing.mu(cfg, iterations);
        for n in 0..cfg.n_elements() {
            let sub = element::element_coeffs_from(cfg, ch, &f, &aux, &quad, n, &mu)?;
            let update = accelerate(cfg, ch, &f, &sub, opts.max_backtracks)?;
            f.set_element(n, &update.point);
        }
        iterations += 1;
        let obj = objective(cfg, ch, &f);
        let prev = *trace.last().expect("nonempty");
        trace.push(obj);
        if (obj - prev).abs() <= cfg.epsilon() {
            converged = true;
            break;
        }
    }

    Ok(SolverReport {
        objective_trace: trace,
        iterations,
        converged,
        wall_time: start.elapsed().as_secs_f64(),
        final_f: f,
    })
}
