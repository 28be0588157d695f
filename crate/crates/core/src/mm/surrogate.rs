//! Quadratic minorizer of the smoothed per-element objective and its
//! closed-form maximizer over the power ball.
//!
//! For group `g` built at the expansion point `x0` the minorizer is
//!
//! ```text
//! c5 + 2 Re{b5^H x} + alpha ||x||^2
//!   = R_smooth(x0) + 2 Re{b6^H (x - x0)} + alpha ||x - x0||^2
//! ```
//!
//! with `b6` the softmin-weighted gradient residual at `x0`, and `alpha` a
//! lower bound on the curvature of the smoothed rate over the feasible
//! ball. The softmin curvature term is bounded through
//! `tp_k = lambda_k^2 P_t + ||b4_k||^2 + 2 sqrt(P_t) lambda_k ||b4_k||`.

use num_complex::Complex64;

use super::element::{norm_sqr, ElementSubproblem};
use crate::error::{Error, Result};
use crate::system::DEFAULT_FEASIBILITY_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSurrogate {
    pub alpha: f64,
    pub b5: Vec<Complex64>,
    pub c5: f64,
}

/// Per-group minorizers and their sum over groups.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateCoeffs {
    pub groups: Vec<GroupSurrogate>,
    pub alpha_bar: f64,
    pub b7: Vec<Complex64>,
    pub c6: f64,
}

impl SurrogateCoeffs {
    pub fn evaluate(&self, x: &[Complex64]) -> f64 {
        quadratic(self.alpha_bar, &self.b7, self.c6, x)
    }

    pub fn evaluate_group(&self, g: usize, x: &[Complex64]) -> f64 {
        let s = &self.groups[g];
        quadratic(s.alpha, &s.b5, s.c5, x)
    }
}

fn quadratic(alpha: f64, b: &[Complex64], c: f64, x: &[Complex64]) -> f64 {
    let lin: f64 = b.iter().zip(x).map(|(bi, xi)| (bi.conj() * xi).re).sum();
    c + 2.0 * lin + alpha * norm_sqr(x)
}

/// `lambda_max(B B^H) P_t + ||b4||^2 + 2 sqrt(P_t) ||B b4||` for a diagonal
/// `B`.
pub fn curvature_bound(bbar_diag: &[f64], b4: &[Complex64], power_budget: f64) -> f64 {
    let lam_sq = bbar_diag.iter().map(|d| d * d).fold(0.0, f64::max);
    let bb4 = bbar_diag
        .iter()
        .zip(b4)
        .map(|(d, b)| (b * d).norm_sqr())
        .sum::<f64>()
        .sqrt();
    lam_sq * power_budget + norm_sqr(b4) + 2.0 * power_budget.sqrt() * bb4
}

fn check_in_ball(x: &[Complex64], power_budget: f64) -> Result<()> {
    let power = norm_sqr(x);
    if power > power_budget * (1.0 + 1e-12) + DEFAULT_FEASIBILITY_TOL {
        return Err(Error::Infeasible {
            element: usize::MAX,
            power,
            budget: power_budget,
        });
    }
    Ok(())
}

/// Builds the minorizer of `sum_g R_smooth_g` at `x0`.
pub fn surrogate_coeffs(sub: &ElementSubproblem, x0: &[Complex64]) -> Result<SurrogateCoeffs> {
    let n_groups = sub.n_groups();
    if x0.len() != n_groups {
        return Err(Error::DimensionMismatch {
            expected: n_groups,
            got: x0.len(),
        });
    }
    check_in_ball(x0, sub.power_budget).map_err(|e| match e {
        Error::Infeasible { power, budget, .. } => Error::Infeasible {
            element: sub.element,
            power,
            budget,
        },
        other => other,
    })?;
    let pt = sub.power_budget;
    let x0_sq = norm_sqr(x0);

    let mut groups = Vec::with_capacity(n_groups);
    for g in 0..n_groups {
        let members = &sub.groups[g];
        let weights = sub.softmax_weights(g, x0);
        let mu = sub.mu[g];

        let mut b6 = vec![Complex64::new(0.0, 0.0); n_groups];
        let mut max_lambda = 0.0f64;
        let mut max_tp = 0.0f64;
        for (&k, &wt) in members.iter().zip(&weights) {
            let user = &sub.users[k];
            for (acc, r) in b6.iter_mut().zip(user.residual(x0)) {
                *acc += r * wt;
            }
            max_lambda = max_lambda.max(user.curvature);
            max_tp = max_tp.max(curvature_bound(&sub.bbar_diag(k), &user.b4, pt));
        }
        let alpha = -max_lambda - 2.0 * mu * max_tp;
        let b5: Vec<Complex64> = b6.iter().zip(x0).map(|(b, x)| b - x * alpha).collect();
        let b6_x0: f64 = b6.iter().zip(x0).map(|(b, x)| (b.conj() * x).re).sum();
        let c5 = sub.smoothed_group_rate(g, x0) - 2.0 * b6_x0 + alpha * x0_sq;
        groups.push(GroupSurrogate { alpha, b5, c5 });
    }

    let alpha_bar = groups.iter().map(|s| s.alpha).sum();
    let mut b7 = vec![Complex64::new(0.0, 0.0); n_groups];
    for s in &groups {
        for (acc, b) in b7.iter_mut().zip(&s.b5) {
            *acc += b;
        }
    }
    let c6 = groups.iter().map(|s| s.c5).sum();
    Ok(SurrogateCoeffs {
        groups,
        alpha_bar,
        b7,
        c6,
    })
}

/// Which branch of the closed form produced the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubproblemCase {
    /// Unconstrained maximizer lies inside the ball; multiplier zero.
    Interior,
    /// Constraint active; point on the sphere of radius `sqrt(P_t)`.
    Boundary,
    /// Linear term vanished with no curvature to pin an interior point.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    pub point: Vec<Complex64>,
    pub case: SubproblemCase,
}

/// Maximizes `alpha_bar ||x||^2 + 2 Re{b7^H x} + c6` over `||x||^2 <= P_t`.
pub fn solve_subproblem(sc: &SurrogateCoeffs, power_budget: f64) -> Result<SubproblemSolution> {
    if !(sc.alpha_bar <= 0.0) {
        return Err(Error::Domain(format!(
            "surrogate curvature must be nonpositive, got {}",
            sc.alpha_bar
        )));
    }
    let b_sq = norm_sqr(&sc.b7);
    if sc.alpha_bar < 0.0 && b_sq <= power_budget * sc.alpha_bar * sc.alpha_bar {
        let scale = -1.0 / sc.alpha_bar;
        return Ok(SubproblemSolution {
            point: sc.b7.iter().map(|b| b * scale).collect(),
            case: SubproblemCase::Interior,
        });
    }
    if b_sq == 0.0 {
        return Ok(SubproblemSolution {
            point: vec![Complex64::new(0.0, 0.0); sc.b7.len()],
            case: SubproblemCase::Degenerate,
        });
    }
    let scale = (power_budget / b_sq).sqrt();
    Ok(SubproblemSolution {
        point: sc.b7.iter().map(|b| b * scale).collect(),
        case: SubproblemCase::Boundary,
    })
}
