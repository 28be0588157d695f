//! Instance generation: half-disc user drops around the TRTC, log-distance
//! path loss and Rician small-scale fading with a steering-vector LOS part.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{ChannelSet, SystemConfig};

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Element layout of the transmissive surface. Inter-element spacing is half
/// a wavelength in every case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrayLayout {
    /// Linear array along the y axis.
    Ula,
    /// Planar array in the y-z plane; `rows * cols` must equal the element
    /// count.
    Upa { rows: usize, cols: usize },
}

/// User drop rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Uniform areal density on the half disc `x >= 0` centred below the
    /// TRTC.
    RightHalfDisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub trtc_position: [f64; 3],
    pub cell_radius: f64,
    pub user_height: f64,
    pub placement: Placement,
    pub rician_k_db: f64,
    pub pathloss_exponent: f64,
    /// Path loss at the reference distance, dB (negative is a loss).
    pub c0_db: f64,
    pub d0: f64,
    pub noise_dbm: f64,
    pub layout: ArrayLayout,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            trtc_position: [0.0, 0.0, 4.5],
            cell_radius: 100.0,
            user_height: 1.5,
            placement: Placement::RightHalfDisc,
            rician_k_db: 5.0,
            pathloss_exponent: 3.6,
            c0_db: -30.0,
            d0: 1.0,
            noise_dbm: -90.0,
            layout: ArrayLayout::Ula,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidConfig(format!(
                "{what} must be positive, got {v}"
            )))
        };
        if !(self.cell_radius > 0.0) {
            return bad("cell_radius", self.cell_radius);
        }
        if !(self.d0 > 0.0) {
            return bad("d0", self.d0);
        }
        if !(self.pathloss_exponent > 0.0) {
            return bad("pathloss_exponent", self.pathloss_exponent);
        }
        if self.trtc_position.iter().any(|c| !c.is_finite())
            || !self.user_height.is_finite()
            || !self.c0_db.is_finite()
            || !self.noise_dbm.is_finite()
            || self.rician_k_db.is_nan()
        {
            return Err(Error::InvalidConfig(
                "geometry values must be finite".into(),
            ));
        }
        if let ArrayLayout::Upa { rows, cols } = self.layout {
            if rows == 0 || cols == 0 {
                return Err(Error::InvalidConfig(
                    "planar layout needs rows, cols >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    fn check_layout(&self, n_elems: usize) -> Result<()> {
        match self.layout {
            ArrayLayout::Upa { rows, cols } if rows * cols != n_elems => Err(Error::InvalidConfig(
                format!("planar layout {rows}x{cols} does not hold {n_elems} elements"),
            )),
            _ => Ok(()),
        }
    }

    pub fn rician_factor(&self) -> f64 {
        db_to_linear(self.rician_k_db)
    }

    pub fn noise_power(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }
}

/// Large-scale power gain `C0 (d/d0)^-alpha` (linear).
pub fn path_loss(geo: &GeometryConfig, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {d}")));
    }
    Ok(db_to_linear(geo.c0_db) * (d / geo.d0).powf(-geo.pathloss_exponent))
}

/// Unit-modulus array response toward the unit direction `dir`.
pub fn steering_vector(layout: ArrayLayout, n_elems: usize, dir: [f64; 3]) -> Vec<Complex64> {
    match layout {
        ArrayLayout::Ula => (0..n_elems)
            .map(|n| Complex64::from_polar(1.0, PI * n as f64 * dir[1]))
            .collect(),
        ArrayLayout::Upa { cols, .. } => (0..n_elems)
            .map(|n| {
                let (row, col) = (n / cols, n % cols);
                Complex64::from_polar(1.0, PI * (col as f64 * dir[1] + row as f64 * dir[2]))
            })
            .collect(),
    }
}

fn circular_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Rician small-scale fading toward `dir`, unit average power per entry.
pub fn draw_rician_toward<R: Rng + ?Sized>(
    geo: &GeometryConfig,
    n_elems: usize,
    dir: [f64; 3],
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    geo.check_layout(n_elems)?;
    let kappa = geo.rician_factor();
    let (los_w, nlos_w) = if kappa.is_infinite() {
        (1.0, 0.0)
    } else {
        ((kappa / (1.0 + kappa)).sqrt(), (1.0 / (1.0 + kappa)).sqrt())
    };
    let los = steering_vector(geo.layout, n_elems, dir);
    Ok(los
        .into_iter()
        .map(|a| {
            let nlos = circular_gaussian(rng);
            a * los_w + nlos * nlos_w
        })
        .collect())
}

/// Rician fading toward a uniformly random azimuth in the front half-space.
pub fn draw_rician<R: Rng + ?Sized>(
    geo: &GeometryConfig,
    n_elems: usize,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let phi = rng.random_range(-FRAC_PI_2..=FRAC_PI_2);
    draw_rician_toward(geo, n_elems, [phi.cos(), phi.sin(), 0.0], rng)
}

/// One sampled problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDraw {
    pub user_positions: Vec<[f64; 3]>,
    pub channels: ChannelSet,
    pub seed_used: u64,
}

/// Draws an instance from the seed stored in `cfg`.
pub fn build_instance(cfg: &SystemConfig, geo: &GeometryConfig) -> Result<InstanceDraw> {
    build_instance_with_seed(cfg, geo, cfg.rng_seed())
}

pub fn build_instance_with_seed(
    cfg: &SystemConfig,
    geo: &GeometryConfig,
    seed: u64,
) -> Result<InstanceDraw> {
    geo.validate()?;
    geo.check_layout(cfg.n_elements())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tx = geo.trtc_position;
    let sigma2 = geo.noise_power();

    let mut positions = Vec::with_capacity(cfg.n_users());
    let mut h = Vec::with_capacity(cfg.n_users());
    for _ in 0..cfg.n_users() {
        let pos = match geo.placement {
            Placement::RightHalfDisc => {
                let r = geo.cell_radius * rng.random::<f64>().sqrt();
                let phi = rng.random_range(-FRAC_PI_2..=FRAC_PI_2);
                [
                    tx[0] + r * phi.cos(),
                    tx[1] + r * phi.sin(),
                    geo.user_height,
                ]
            }
        };
        let delta = [pos[0] - tx[0], pos[1] - tx[1], pos[2] - tx[2]];
        let d = delta.iter().map(|c| c * c).sum::<f64>().sqrt();
        let gain = path_loss(geo, d)?.sqrt();
        let dir = [delta[0] / d, delta[1] / d, delta[2] / d];
        let small = draw_rician_toward(geo, cfg.n_elements(), dir, &mut rng)?;
        h.push(small.into_iter().map(|z| z * gain).collect());
        positions.push(pos);
    }
    Ok(InstanceDraw {
        user_positions: positions,
        channels: ChannelSet::new(h, vec![sigma2; cfg.n_users()])?,
        seed_used: seed,
    })
}

/// Euclidean distance from the TRTC to `pos`.
pub fn distance_to_trtc(geo: &GeometryConfig, pos: [f64; 3]) -> f64 {
    geo.trtc_position
        .iter()
        .zip(pos)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
