//! The MM fixed-point map on one element and its squared-extrapolation
//! acceleration with objective safeguard.

use num_complex::Complex64;

use super::element::{element_coeffs_from, norm_sqr, ElementSubproblem};
use super::surrogate::{solve_subproblem, surrogate_coeffs};
use crate::error::Result;
use crate::system::{objective, Beamformer, ChannelSet, SystemConfig};
use crate::wmmse::{quad_coeffs, AuxiliaryState};

impl ElementSubproblem {
    /// One MM step: build the minorizer at `x` and return its maximizer.
    pub fn fixed_point(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let sc = surrogate_coeffs(self, x)?;
        Ok(solve_subproblem(&sc, self.power_budget)?.point)
    }
}

/// Applies the MM map once to element `n` of `f`.
pub fn mm_fixed_point(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    aux: &AuxiliaryState,
    n: usize,
    mu: &[f64],
) -> Result<Vec<Complex64>> {
    let quad = quad_coeffs(cfg, ch, aux)?;
    let sub = element_coeffs_from(cfg, ch, f, aux, &quad, n, mu)?;
    sub.fixed_point(&f.element(n))
}

/// How an accelerated element update was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// First MM step did not move the point.
    Stationary,
    /// Second difference vanished; the plain two-step MM point was used.
    PlainMm,
    /// Extrapolated point accepted after `backtracks` step reductions.
    Extrapolated { backtracks: usize },
    /// Backtracking budget exhausted; the plain two-step MM point was used.
    FallbackMm,
    /// Neither the extrapolated nor the plain MM point kept the objective
    /// from decreasing; the element was left unchanged.
    Rejected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementUpdate {
    pub point: Vec<Complex64>,
    pub outcome: UpdateOutcome,
}

fn project(mut x: Vec<Complex64>, power_budget: f64) -> Vec<Complex64> {
    let p = norm_sqr(&x);
    if p > power_budget {
        let scale = (power_budget / p).sqrt();
        x.iter_mut().for_each(|z| *z *= scale);
    }
    x
}

fn extrapolate(x0: &[Complex64], j1: &[Complex64], j2: &[Complex64], tau: f64) -> Vec<Complex64> {
    x0.iter()
        .zip(j1)
        .zip(j2)
        .map(|((x, a), b)| x - a * (2.0 * tau) + b * (tau * tau))
        .collect()
}

/// Accelerated update of element `n` given a prebuilt subproblem.
///
/// The safeguard compares the true sum of group-minimum rates with element
/// `n` replaced; the result never lowers it.
pub fn accelerate(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    sub: &ElementSubproblem,
    max_backtracks: usize,
) -> Result<ElementUpdate> {
    let n = sub.element;
    let pt = sub.power_budget;
    let x0 = f.element(n);
    let x1 = sub.fixed_point(&x0)?;
    let j1: Vec<Complex64> = x1.iter().zip(&x0).map(|(a, b)| a - b).collect();
    let j1_norm = norm_sqr(&j1).sqrt();
    if j1_norm == 0.0 {
        return Ok(ElementUpdate {
            point: x0,
            outcome: UpdateOutcome::Stationary,
        });
    }
    let x2 = sub.fixed_point(&x1)?;

    let mut trial = f.clone();
    let mut eval = |x: &[Complex64]| {
        trial.set_element(n, x);
        objective(cfg, ch, &trial)
    };
    let base = eval(&x0);

    let j2: Vec<Complex64> = x2
        .iter()
        .zip(&x1)
        .zip(&j1)
        .map(|((c, b), a)| c - b - a)
        .collect();
    let j2_norm = norm_sqr(&j2).sqrt();
    if j2_norm == 0.0 {
        return Ok(if eval(&x2) >= base {
            ElementUpdate {
                point: x2,
                outcome: UpdateOutcome::PlainMm,
            }
        } else {
            ElementUpdate {
                point: x0,
                outcome: UpdateOutcome::Rejected,
            }
        });
    }

    let mut tau = -j1_norm / j2_norm;
    let mut candidate = project(extrapolate(&x0, &j1, &j2, tau), pt);
    let mut backtracks = 0;
    while eval(&candidate) < base {
        if backtracks == max_backtracks {
            return Ok(if eval(&x2) >= base {
                ElementUpdate {
                    point: x2,
                    outcome: UpdateOutcome::FallbackMm,
                }
            } else {
                ElementUpdate {
                    point: x0,
                    outcome: UpdateOutcome::Rejected,
                }
            });
        }
        tau = (tau - 1.0) / 2.0;
        candidate = project(extrapolate(&x0, &j1, &j2, tau), pt);
        backtracks += 1;
    }
    Ok(ElementUpdate {
        point: candidate,
        outcome: UpdateOutcome::Extrapolated { backtracks },
    })
}

/// Builds the element-`n` subproblem at `f` and runs [`accelerate`].
pub fn accelerated_element_update(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    aux: &AuxiliaryState,
    n: usize,
    mu: &[f64],
    max_backtracks: usize,
) -> Result<ElementUpdate> {
    let quad = quad_coeffs(cfg, ch, aux)?;
    let sub = element_coeffs_from(cfg, ch, f, aux, &quad, n, mu)?;
    accelerate(cfg, ch, f, &sub, max_backtracks)
}
