//! Weighted-MMSE reformulation of the user rates.
//!
//! For fixed `f`, the rate `ln(1 + SINR_k)` equals the maximum over a
//! receive scalar `beta_k` and a weight `omega_k > 0` of
//!
//! ```text
//! ln(omega) - omega * (1 - 2 Re{beta* h^H f_g} + |beta|^2 (sum_i |h^H f_i|^2 + sigma^2)) + 1
//! ```
//!
//! which is a concave quadratic in `f`. Both maximizers have closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::system::{group_gains, Beamformer, ChannelSet, SystemConfig};

/// Per-user receive scalars and MSE weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryState {
    pub beta: Vec<Complex64>,
    pub omega: Vec<f64>,
}

impl AuxiliaryState {
    pub fn new(beta: Vec<Complex64>, omega: Vec<f64>) -> Result<Self> {
        if beta.len() != omega.len() {
            return Err(Error::DimensionMismatch {
                expected: beta.len(),
                got: omega.len(),
            });
        }
        if let Some(w) = omega.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::Domain(format!(
                "MSE weight must be positive, got {w}"
            )));
        }
        Ok(Self { beta, omega })
    }

    /// Closed-form maximizers at `f`.
    pub fn optimal(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer) -> Self {
        Self {
            beta: update_beta(cfg, ch, f),
            omega: update_omega(cfg, ch, f),
        }
    }

    pub fn n_users(&self) -> usize {
        self.beta.len()
    }
}

/// MMSE receive scalar: `h^H f_g / (sum over all groups |h^H f_i|^2 + sigma^2)`.
pub fn update_beta(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer) -> Vec<Complex64> {
    (0..cfg.n_users())
        .map(|k| {
            let gains = group_gains(ch, f, k);
            let total: f64 = gains.iter().map(Complex64::norm_sqr).sum::<f64>() + ch.noise(k);
            gains[cfg.group_of(k)] / total
        })
        .collect()
}

/// `1 + SINR_k`.
pub fn update_omega(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer) -> Vec<f64> {
    (0..cfg.n_users())
        .map(|k| 1.0 + crate::system::sinr_unchecked(cfg, ch, f, k))
        .collect()
}

fn check_aux(cfg: &SystemConfig, aux: &AuxiliaryState) -> Result<()> {
    if aux.n_users() != cfg.n_users() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_users(),
            got: aux.n_users(),
        });
    }
    Ok(())
}

/// The variational rate of user `k` evaluated at `(f, beta_k, omega_k)`.
pub fn tilde_rate(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    f: &Beamformer,
    aux: &AuxiliaryState,
    k: usize,
) -> Result<f64> {
    cfg.check_user(k)?;
    check_aux(cfg, aux)?;
    let gains = group_gains(ch, f, k);
    let beta = aux.beta[k];
    let omega = aux.omega[k];
    let received: f64 = gains.iter().map(Complex64::norm_sqr).sum::<f64>() + ch.noise(k);
    let cross = (beta.conj() * gains[cfg.group_of(k)]).re;
    Ok(omega.ln() - omega * (1.0 - 2.0 * cross + beta.norm_sqr() * received) + 1.0)
}

/// Coefficients of the variational rate as a quadratic in `f`:
/// `-sum_g w_k |h_k^H f_g|^2 + 2 Re{b1_k^H f_{g(k)}} + c1_k`.
///
/// The curvature matrix is block diagonal with `G` copies of
/// `w_k h_k h_k^H`, so only the scalar `w_k` is kept. `b1_k` is the nonzero
/// block (group `g(k)`) of the linear coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadCoeffs {
    pub w: Vec<f64>,
    pub b1: Vec<Vec<Complex64>>,
    pub c1: Vec<f64>,
}

impl QuadCoeffs {
    /// Evaluates the quadratic form for user `k` at `f`.
    pub fn evaluate(&self, cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer, k: usize) -> f64 {
        let gains = group_gains(ch, f, k);
        let quad: f64 = gains.iter().map(Complex64::norm_sqr).sum::<f64>() * self.w[k];
        let lin = crate::system::inner(&self.b1[k], f.group(cfg.group_of(k))).re;
        -quad + 2.0 * lin + self.c1[k]
    }
}

pub fn quad_coeffs(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    aux: &AuxiliaryState,
) -> Result<QuadCoeffs> {
    check_aux(cfg, aux)?;
    let n_users = cfg.n_users();
    let mut w = Vec::with_capacity(n_users);
    let mut b1 = Vec::with_capacity(n_users);
    let mut c1 = Vec::with_capacity(n_users);
    for k in 0..n_users {
        let beta = aux.beta[k];
        let omega = aux.omega[k];
        let wk = omega * beta.norm_sqr();
        let scale = beta * omega;
        w.push(wk);
        b1.push(ch.channel(k).iter().map(|h| h * scale).collect());
        c1.push(omega.ln() - omega - wk * ch.noise(k) + 1.0);
    }
    Ok(QuadCoeffs { w, b1, c1 })
}
