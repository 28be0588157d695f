//! Problem instance and the rate model.
//!
//! The beamformer is stored group-major: group `g` occupies the contiguous
//! slice `g*N .. (g+1)*N`, and the weights of element `n` across all groups
//! (the per-element subvector) are the strided entries `n, N+n, ...`.
//! The stacked channel and the 0/1 selection matrices of the dense model
//! are never built; every quadratic form reduces to `G` inner products
//! `h_k^H f_g`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack on per-element power used by feasibility checks.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-9;

/// Dimensions, group map, power budget and outer-loop tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    n_elements: usize,
    n_groups: usize,
    group_of: Vec<usize>,
    power_budget: f64,
    epsilon: f64,
    max_outer_iters: usize,
    rng_seed: u64,
    members: Vec<Vec<usize>>,
}

impl SystemConfig {
    pub fn new(
        n_elements: usize,
        n_groups: usize,
        group_of: Vec<usize>,
        power_budget: f64,
        epsilon: f64,
        max_outer_iters: usize,
        rng_seed: u64,
    ) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::InvalidConfig("need at least one element".into()));
        }
        if n_groups == 0 {
            return Err(Error::InvalidConfig("need at least one group".into()));
        }
        if group_of.len() < n_groups {
            return Err(Error::InvalidConfig(format!(
                "{} users cannot fill {} groups",
                group_of.len(),
                n_groups
            )));
        }
        if !(power_budget > 0.0 && power_budget.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "per-element power budget must be positive, got {power_budget}"
            )));
        }
        if !(epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "convergence threshold must be positive, got {epsilon}"
            )));
        }
        let mut members = vec![Vec::new(); n_groups];
        for (k, &g) in group_of.iter().enumerate() {
            if g >= n_groups {
                return Err(Error::InvalidConfig(format!(
                    "user {k} assigned to group {g}, only {n_groups} groups"
                )));
            }
            members[g].push(k);
        }
        if let Some(g) = members.iter().position(Vec::is_empty) {
            return Err(Error::InvalidConfig(format!("group {g} has no users")));
        }
        Ok(Self {
            n_elements,
            n_groups,
            group_of,
            power_budget,
            epsilon,
            max_outer_iters,
            rng_seed,
            members,
        })
    }

    /// `n_groups` groups of `users_per_group` users each, users numbered
    /// group by group.
    pub fn uniform(
        n_elements: usize,
        n_groups: usize,
        users_per_group: usize,
        power_budget: f64,
    ) -> Result<Self> {
        if users_per_group == 0 {
            return Err(Error::InvalidConfig("groups must be non-empty".into()));
        }
        let group_of = (0..n_groups)
            .flat_map(|g| std::iter::repeat_n(g, users_per_group))
            .collect();
        Self::new(n_elements, n_groups, group_of, power_budget, 1e-4, 100, 0)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "convergence threshold must be positive, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_max_outer_iters(mut self, iters: usize) -> Self {
        self.max_outer_iters = iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn n_users(&self) -> usize {
        self.group_of.len()
    }

    pub fn group_of(&self, k: usize) -> usize {
        self.group_of[k]
    }

    pub fn group_map(&self) -> &[usize] {
        &self.group_of
    }

    /// Users of group `g`, ascending.
    pub fn members(&self, g: usize) -> &[usize] {
        &self.members[g]
    }

    pub fn power_budget(&self) -> f64 {
        self.power_budget
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_outer_iters(&self) -> usize {
        self.max_outer_iters
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn check_user(&self, k: usize) -> Result<()> {
        if k < self.n_users() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                kind: "user",
                index: k,
                len: self.n_users(),
            })
        }
    }
}

/// Per-user channels `h_k` (linear scale) and noise powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    h: Vec<Vec<Complex64>>,
    sigma2: Vec<f64>,
}

impl ChannelSet {
    pub fn new(h: Vec<Vec<Complex64>>, sigma2: Vec<f64>) -> Result<Self> {
        if h.len() != sigma2.len() {
            return Err(Error::DimensionMismatch {
                expected: h.len(),
                got: sigma2.len(),
            });
        }
        if let Some(first) = h.first() {
            let n = first.len();
            if let Some(bad) = h.iter().find(|hk| hk.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: bad.len(),
                });
            }
        }
        if h.iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidConfig(
                "channel entries must be finite".into(),
            ));
        }
        if let Some(s) = sigma2.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidConfig(format!(
                "noise power must be positive and finite, got {s}"
            )));
        }
        Ok(Self { h, sigma2 })
    }

    /// Checks that the channel set matches the configured dimensions.
    pub fn check_against(&self, cfg: &SystemConfig) -> Result<()> {
        if self.h.len() != cfg.n_users() {
            return Err(Error::DimensionMismatch {
                expected: cfg.n_users(),
                got: self.h.len(),
            });
        }
        if let Some(hk) = self.h.iter().find(|hk| hk.len() != cfg.n_elements()) {
            return Err(Error::DimensionMismatch {
                expected: cfg.n_elements(),
                got: hk.len(),
            });
        }
        Ok(())
    }

    pub fn n_users(&self) -> usize {
        self.h.len()
    }

    pub fn channel(&self, k: usize) -> &[Complex64] {
        &self.h[k]
    }

    pub fn channels(&self) -> &[Vec<Complex64>] {
        &self.h
    }

    pub fn noise(&self, k: usize) -> f64 {
        self.sigma2[k]
    }

    pub fn noises(&self) -> &[f64] {
        &self.sigma2
    }
}

/// Stacked beamformer `f = [f_1; ...; f_G]`, group-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beamformer {
    n_elements: usize,
    n_groups: usize,
    data: Vec<Complex64>,
}

impl Beamformer {
    pub fn zeros(n_elements: usize, n_groups: usize) -> Self {
        Self {
            n_elements,
            n_groups,
            data: vec![Complex64::new(0.0, 0.0); n_elements * n_groups],
        }
    }

    pub fn from_vec(n_elements: usize, n_groups: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n_elements * n_groups {
            return Err(Error::DimensionMismatch {
                expected: n_elements * n_groups,
                got: data.len(),
            });
        }
        Ok(Self {
            n_elements,
            n_groups,
            data,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    /// Contiguous block `f_g`.
    pub fn group(&self, g: usize) -> &[Complex64] {
        &self.data[g * self.n_elements..(g + 1) * self.n_elements]
    }

    /// Per-element subvector `[f(n), f(N+n), ..., f((G-1)N+n)]`.
    pub fn element(&self, n: usize) -> Vec<Complex64> {
        self.data
            .iter()
            .skip(n)
            .step_by(self.n_elements)
            .copied()
            .collect()
    }

    pub fn set_element(&mut self, n: usize, values: &[Complex64]) {
        assert_eq!(values.len(), self.n_groups, "element subvector length");
        for (g, v) in values.iter().enumerate() {
            self.data[g * self.n_elements + n] = *v;
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    /// Multiplies every weight by `e^{j theta}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            data: self.data.iter().map(|z| z * phase).collect(),
            ..self.clone()
        }
    }

    fn check_shape(&self, cfg: &SystemConfig) -> Result<()> {
        if self.n_elements != cfg.n_elements() || self.n_groups != cfg.n_groups() {
            return Err(Error::DimensionMismatch {
                expected: cfg.n_elements() * cfg.n_groups(),
                got: self.data.len(),
            });
        }
        Ok(())
    }
}

/// `h^H x`.
pub fn inner(h: &[Complex64], x: &[Complex64]) -> Complex64 {
    h.iter().zip(x).map(|(a, b)| a.conj() * b).sum()
}

/// `h_k^H f_g` for every group `g`.
pub fn group_gains(ch: &ChannelSet, f: &Beamformer, k: usize) -> Vec<Complex64> {
    (0..f.n_groups())
        .map(|g| inner(ch.channel(k), f.group(g)))
        .collect()
}

/// SINR of user `k`; interference comes from every other group's beam.
pub fn sinr(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer, k: usize) -> Result<f64> {
    cfg.check_user(k)?;
    f.check_shape(cfg)?;
    Ok(sinr_unchecked(cfg, ch, f, k))
}

pub(crate) fn sinr_unchecked(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer, k: usize) -> f64 {
    let own = cfg.group_of(k);
    let gains = group_gains(ch, f, k);
    let signal = gains[own].norm_sqr();
    let interference: f64 = gains
        .iter()
        .enumerate()
        .filter(|(g, _)| *g != own)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    signal / (interference + ch.noise(k))
}

/// Achievable rate of user `k` in nats.
pub fn user_rate(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer, k: usize) -> Result<f64> {
    sinr(cfg, ch, f, k).map(f64::ln_1p)
}

/// All user rates in nats.
pub fn user_rates(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer) -> Vec<f64> {
    (0..cfg.n_users())
        .map(|k| sinr_unchecked(cfg, ch, f, k).ln_1p())
        .collect()
}

/// Sum over groups of the worst rate in each group, in nats.
pub fn objective(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer) -> f64 {
    let rates = user_rates(cfg, ch, f);
    (0..cfg.n_groups())
        .map(|g| {
            cfg.members(g)
                .iter()
                .map(|&k| rates[k])
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Power `||f_bar_n||^2` radiated by element `n` over all groups.
pub fn unit_power(f: &Beamformer, n: usize) -> Result<f64> {
    if n >= f.n_elements() {
        return Err(Error::IndexOutOfRange {
            kind: "element",
            index: n,
            len: f.n_elements(),
        });
    }
    Ok(f.data
        .iter()
        .skip(n)
        .step_by(f.n_elements)
        .map(Complex64::norm_sqr)
        .sum())
}

pub fn is_feasible(cfg: &SystemConfig, f: &Beamformer, tol: f64) -> bool {
    first_violation(cfg, f, tol).is_none()
}

/// First element whose power exceeds `P_t + tol`, as an error value.
pub fn first_violation(cfg: &SystemConfig, f: &Beamformer, tol: f64) -> Option<Error> {
    (0..f.n_elements()).find_map(|n| {
        let power = unit_power(f, n).expect("element index in range");
        (power > cfg.power_budget() + tol).then_some(Error::Infeasible {
            element: n,
            power,
            budget: cfg.power_budget(),
        })
    })
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}
