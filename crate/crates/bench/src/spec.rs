//! Experiment description, read from a single JSON document.

use serde::{Deserialize, Serialize};
use trtc_core::channel::{dbm_to_watts, GeometryConfig};
use trtc_core::mm::MmOptions;
use trtc_core::system::SystemConfig;

use crate::error::{BenchError, Result};

/// System dimensions and outer-loop settings in file units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSpec {
    pub elements: usize,
    pub groups: usize,
    pub users_per_group: usize,
    /// Per-element transmit power budget, dBm.
    pub power_dbm: f64,
    pub epsilon: f64,
    pub max_outer_iters: usize,
    pub seed: u64,
}

impl Default for SystemSpec {
    fn default() -> Self {
        Self {
            elements: 16,
            groups: 2,
            users_per_group: 2,
            power_dbm: 10.0,
            epsilon: 1e-4,
            max_outer_iters: 100,
            seed: 0,
        }
    }
}

impl SystemSpec {
    pub fn to_config(&self, seed: u64) -> Result<SystemConfig> {
        let cfg = SystemConfig::uniform(
            self.elements,
            self.groups,
            self.users_per_group,
            dbm_to_watts(self.power_dbm),
        )?
        .with_epsilon(self.epsilon)?
        .with_max_outer_iters(self.max_outer_iters)
        .with_seed(seed);
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseConfig {
    pub system: SystemSpec,
    pub geometry: GeometryConfig,
    pub solver: MmOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    PowerDbm,
    UsersPerGroup,
    RadiusM,
    PathlossExponent,
    Elements,
    #[default]
    None,
}

impl SweepAxis {
    pub fn parse(name: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_owned()))
            .map_err(|_| BenchError::Config(format!("unknown sweep axis `{name}`")))
    }

    fn takes_integers(self) -> bool {
        matches!(self, SweepAxis::UsersPerGroup | SweepAxis::Elements)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Accelerated element-wise MM (this crate).
    Mm,
    /// WMMSE with an SOCP beamformer step; provided by the external
    /// convex-baselines component.
    Socp,
    /// Penalty-based SDP; provided by the external convex-baselines
    /// component.
    Penalty,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mm => "mm",
            Algorithm::Socp => "socp",
            Algorithm::Penalty => "penalty",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_owned()))
            .map_err(|_| BenchError::Config(format!("unknown algorithm `{name}`")))
    }

    pub fn is_builtin(self) -> bool {
        self == Algorithm::Mm
    }
}

fn default_trials() -> usize {
    1
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Mm]
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub base: BaseConfig,
    #[serde(default)]
    pub sweep_axis: SweepAxis,
    #[serde(default)]
    pub sweep_values: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// When false, `runtime_ms` is written as 0 so that output files are
    /// reproducible byte for byte.
    #[serde(default = "default_true")]
    pub record_runtime: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            base: BaseConfig::default(),
            sweep_axis: SweepAxis::None,
            sweep_values: Vec::new(),
            trials: default_trials(),
            algorithms: default_algorithms(),
            record_runtime: true,
        }
    }
}

/// One point of the sweep with the configs it induces.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub axis_value: Option<f64>,
    pub system: SystemSpec,
    pub geometry: GeometryConfig,
}

impl ExperimentSpec {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms requested".into()));
        }
        if self.sweep_axis != SweepAxis::None && self.sweep_values.is_empty() {
            return Err(BenchError::Config(format!(
                "sweep axis {:?} needs at least one value",
                self.sweep_axis
            )));
        }
        self.base.solver.validate()?;
        for point in self.points()? {
            point.system.to_config(0)?;
            point.geometry.validate()?;
        }
        Ok(())
    }

    /// The sweep points, in value order as listed.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let base = SweepPoint {
            axis_value: None,
            system: self.base.system.clone(),
            geometry: self.base.geometry.clone(),
        };
        if self.sweep_axis == SweepAxis::None {
            return Ok(vec![base]);
        }
        self.sweep_values
            .iter()
            .map(|&v| {
                if !v.is_finite() {
                    return Err(BenchError::Config(format!("sweep value {v} is not finite")));
                }
                if self.sweep_axis.takes_integers()
                    && (v.fract() != 0.0 || !(1.0..=1e6).contains(&v))
                {
                    return Err(BenchError::Config(format!(
                        "sweep axis {:?} needs positive integers, got {v}",
                        self.sweep_axis
                    )));
                }
                let mut p = base.clone();
                p.axis_value = Some(v);
                match self.sweep_axis {
                    SweepAxis::PowerDbm => p.system.power_dbm = v,
                    SweepAxis::UsersPerGroup => p.system.users_per_group = v as usize,
                    SweepAxis::RadiusM => p.geometry.cell_radius = v,
                    SweepAxis::PathlossExponent => p.geometry.pathloss_exponent = v,
                    SweepAxis::Elements => p.system.elements = v as usize,
                    SweepAxis::None => unreachable!(),
                }
                Ok(p)
            })
            .collect()
    }
}
