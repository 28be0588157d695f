#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trtc_core::system::{Beamformer, ChannelSet, SystemConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cgauss<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller, unit variance
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    let r = (-u.ln()).sqrt();
    let t = std::f64::consts::TAU * v;
    Complex64::new(r * t.cos(), r * t.sin())
}

/// `G` groups of `per` users, unit-variance channels, noise in [0.05, 1].
pub fn instance<R: Rng>(
    rng: &mut R,
    n: usize,
    g: usize,
    per: usize,
    pt: f64,
) -> (SystemConfig, ChannelSet) {
    let cfg = SystemConfig::uniform(n, g, per, pt).unwrap();
    let h = (0..g * per)
        .map(|_| (0..n).map(|_| cgauss(rng)).collect())
        .collect();
    let sigma2 = (0..g * per).map(|_| rng.random_range(0.05..1.0)).collect();
    (cfg, ChannelSet::new(h, sigma2).unwrap())
}

/// Uniform point in the complex ball of squared radius `pt`.
pub fn ball_point<R: Rng>(rng: &mut R, dim: usize, pt: f64) -> Vec<Complex64> {
    let mut x: Vec<Complex64> = (0..dim).map(|_| cgauss(rng)).collect();
    let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let radius = pt.sqrt() * rng.random::<f64>().powf(1.0 / (2 * dim) as f64);
    x.iter_mut().for_each(|z| *z *= radius / norm);
    x
}

/// Random beamformer with every element strictly inside its ball.
pub fn feasible_beamformer<R: Rng>(rng: &mut R, cfg: &SystemConfig) -> Beamformer {
    let (n, g) = (cfg.n_elements(), cfg.n_groups());
    let mut f = Beamformer::zeros(n, g);
    for e in 0..n {
        let x = ball_point(rng, g, cfg.power_budget());
        f.set_element(e, &x);
    }
    f
}
