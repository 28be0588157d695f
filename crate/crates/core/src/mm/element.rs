//! Per-element view of the variational rates.
//!
//! With every element except `n` frozen, user `k`'s variational rate is a
//! concave quadratic in the `G`-vector `x = f_bar_n`:
//!
//! ```text
//! -lambda_k ||x||^2 + 2 Re{b4_k^H x} + c4_k,   lambda_k = w_k |h_k(n)|^2
//! ```
//!
//! The curvature is a scaled identity because every group block of the
//! full curvature matrix is the same rank-one `w_k h_k h_k^H`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::system::{group_gains, Beamformer, ChannelSet, SystemConfig};
use crate::wmmse::{quad_coeffs, AuxiliaryState, QuadCoeffs};

/// Quadratic coefficients of one user's rate restricted to one element.
#[derive(Debug, Clone, PartialEq)]
pub struct UserTerm {
    /// Common diagonal entry of the `G x G` curvature matrix.
    pub curvature: f64,
    pub b4: Vec<Complex64>,
    pub c4: f64,
}

impl UserTerm {
    pub fn evaluate(&self, x: &[Complex64]) -> f64 {
        -self.curvature * norm_sqr(x) + 2.0 * dot(&self.b4, x).re + self.c4
    }

    /// `b4 - B_bar x`; half the Wirtinger gradient of [`Self::evaluate`].
    pub fn residual(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.b4
            .iter()
            .zip(x)
            .map(|(b, xi)| b - xi * self.curvature)
            .collect()
    }
}

/// The element-`n` problem: user terms, the group map and one smoothing
/// parameter per group.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSubproblem {
    pub element: usize,
    pub power_budget: f64,
    pub users: Vec<UserTerm>,
    pub groups: Vec<Vec<usize>>,
    pub mu: Vec<f64>,
}

pub(crate) fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(Complex64::norm_sqr).sum()
}

/// `a^H b`.
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(p, q)| p.conj() * q).sum()
}

/// Builds the element-`n` subproblem at the current `f`.
pub fn element_coeffs(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    aux: &AuxiliaryState,
    n: usize,
    mu: &[f64],
) -> Result<ElementSubproblem> {
    let quad = quad_coeffs(cfg, ch, aux)?;
    element_coeffs_from(cfg, ch, f, aux, &quad, n, mu)
}

pub(crate) fn element_coeffs_from(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    aux: &AuxiliaryState,
    quad: &QuadCoeffs,
    n: usize,
    mu: &[f64],
) -> Result<ElementSubproblem> {
    if n >= cfg.n_elements() {
        return Err(Error::IndexOutOfRange {
            kind: "element",
            index: n,
            len: cfg.n_elements(),
        });
    }
    if mu.len() != cfg.n_groups() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_groups(),
            got: mu.len(),
        });
    }
    if let Some(m) = mu.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(Error::Domain(format!(
            "smoothing parameter must be positive, got {m}"
        )));
    }
    let n_groups = cfg.n_groups();
    let xn = f.element(n);
    let users = (0..cfg.n_users())
        .map(|k| {
            let hn = ch.channel(k)[n];
            let w = quad.w[k];
            let own = cfg.group_of(k);
            let ob = aux.omega[k] * aux.beta[k];
            // s_g = sum_{j != n} h(j)^* f_g(j)
            let partial: Vec<Complex64> = group_gains(ch, f, k)
                .into_iter()
                .zip(&xn)
                .map(|(full, x)| full - hn.conj() * x)
                .collect();
            let b4 = (0..n_groups)
                .map(|g| {
                    let b3 = if g == own {
                        ob * hn
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    b3 - hn * partial[g] * w
                })
                .collect();
            let c2 = w * norm_sqr(&partial);
            let c3 = 2.0 * (ob.conj() * partial[own]).re;
            UserTerm {
                curvature: w * hn.norm_sqr(),
                b4,
                c4: quad.c1[k] - c2 + c3,
            }
        })
        .collect();
    Ok(ElementSubproblem {
        element: n,
        power_budget: cfg.power_budget(),
        users,
        groups: (0..n_groups).map(|g| cfg.members(g).to_vec()).collect(),
        mu: mu.to_vec(),
    })
}

impl ElementSubproblem {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Diagonal of the curvature matrix of user `k`.
    pub fn bbar_diag(&self, k: usize) -> Vec<f64> {
        vec![self.users[k].curvature; self.n_groups()]
    }

    /// User `k`'s rate as a function of the element subvector.
    pub fn local_rate(&self, k: usize, x: &[Complex64]) -> f64 {
        self.users[k].evaluate(x)
    }

    fn group_rates(&self, g: usize, x: &[Complex64]) -> Vec<f64> {
        self.groups[g]
            .iter()
            .map(|&k| self.local_rate(k, x))
            .collect()
    }

    /// Worst local rate in group `g`.
    pub fn min_group_rate(&self, g: usize, x: &[Complex64]) -> f64 {
        self.group_rates(g, x)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Log-sum-exp lower approximation of the group minimum.
    pub fn smoothed_group_rate(&self, g: usize, x: &[Complex64]) -> f64 {
        soft_min(&self.group_rates(g, x), self.mu[g])
    }

    /// Softmin weights over the members of group `g`, in member order.
    pub fn softmax_weights(&self, g: usize, x: &[Complex64]) -> Vec<f64> {
        soft_min_weights(&self.group_rates(g, x), self.mu[g])
    }

    /// Sum over groups of the smoothed group rates.
    pub fn smoothed_sum(&self, x: &[Complex64]) -> f64 {
        (0..self.n_groups())
            .map(|g| self.smoothed_group_rate(g, x))
            .sum()
    }

    /// Sum over groups of the exact group minima.
    pub fn min_sum(&self, x: &[Complex64]) -> f64 {
        (0..self.n_groups())
            .map(|g| self.min_group_rate(g, x))
            .sum()
    }
}

/// `-(1/mu) ln sum_k exp(-mu r_k)` with a min-shift for stability.
pub fn soft_min(rates: &[f64], mu: f64) -> f64 {
    let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let tail: f64 = rates.iter().map(|r| (-mu * (r - lo)).exp()).sum();
    lo - tail.ln() / mu
}

pub fn soft_min_weights(rates: &[f64], mu: f64) -> Vec<f64> {
    let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let e: Vec<f64> = rates.iter().map(|r| (-mu * (r - lo)).exp()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}
