mod common;

use common::{cgauss, feasible_beamformer, instance, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use trtc_core::system::{
    is_feasible, objective, sinr, unit_power, user_rate, user_rates, Beamformer, ChannelSet,
    SystemConfig,
};

type Mat = Vec<Vec<Complex64>>;

/// `NG x NG` diagonal selector of group block `g`.
fn selector(n: usize, groups: usize, g: usize) -> Mat {
    let dim = n * groups;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..n {
        m[g * n + i][g * n + i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn matvec(m: &Mat, x: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// SINR from the stacked channel `h_bar = [h; h; ...; h]` and explicit
/// selection matrices.
fn dense_sinr(cfg: &SystemConfig, ch: &ChannelSet, f: &Beamformer, k: usize) -> f64 {
    let (n, groups) = (cfg.n_elements(), cfg.n_groups());
    let h_bar: Vec<Complex64> = (0..groups).flat_map(|_| ch.channel(k).to_vec()).collect();
    let power = |g: usize| {
        let sel = matvec(&selector(n, groups, g), f.as_slice());
        let s: Complex64 = h_bar.iter().zip(&sel).map(|(h, x)| h.conj() * x).sum();
        s.norm_sqr()
    };
    let own = cfg.group_of(k);
    let interference: f64 = (0..groups).filter(|&g| g != own).map(power).sum();
    power(own) / (interference + ch.noise(k))
}

#[test]
fn sinr_matches_dense_matrix_evaluation() {
    let mut r = rng(11);
    for (n, g, per) in [(4, 2, 1), (1, 3, 2), (3, 3, 1), (4, 1, 3), (2, 2, 2)] {
        for _ in 0..20 {
            let (cfg, ch) = instance(&mut r, n, g, per, 1.0);
            let f = feasible_beamformer(&mut r, &cfg);
            for k in 0..cfg.n_users() {
                let fast = sinr(&cfg, &ch, &f, k).unwrap();
                let dense = dense_sinr(&cfg, &ch, &f, k);
                assert!(
                    (fast - dense).abs() <= 1e-12 * dense.abs().max(1e-300),
                    "{fast} vs {dense}"
                );
            }
        }
    }
}

#[test]
fn rates_are_natural_log_of_one_plus_sinr() {
    let mut r = rng(3);
    let (cfg, ch) = instance(&mut r, 4, 2, 2, 0.5);
    let f = feasible_beamformer(&mut r, &cfg);
    for (k, rate) in user_rates(&cfg, &ch, &f).into_iter().enumerate() {
        let s = sinr(&cfg, &ch, &f, k).unwrap();
        assert!((rate - s.ln_1p()).abs() < 1e-15);
        assert_eq!(rate, user_rate(&cfg, &ch, &f, k).unwrap());
    }
}

#[test]
fn element_powers_sum_to_total() {
    let mut r = rng(5);
    let (cfg, _) = instance(&mut r, 5, 3, 1, 2.0);
    let f = feasible_beamformer(&mut r, &cfg);
    let total: f64 = (0..5).map(|n| unit_power(&f, n).unwrap()).sum();
    assert!((total - f.norm_sqr()).abs() < 1e-12);
    assert!(is_feasible(&cfg, &f, 0.0));
}

fn arb_instance() -> impl Strategy<Value = (SystemConfig, ChannelSet, Beamformer, f64)> {
    (
        1usize..5,
        1usize..4,
        1usize..3,
        any::<u64>(),
        0.0..std::f64::consts::TAU,
    )
        .prop_map(|(n, g, per, seed, theta)| {
            let mut r = rng(seed);
            let (cfg, ch) = instance(&mut r, n, g, per, 1.0);
            let f = feasible_beamformer(&mut r, &cfg);
            (cfg, ch, f, theta)
        })
}

proptest! {
    #[test]
    fn objective_is_invariant_to_common_phase((cfg, ch, f, theta) in arb_instance()) {
        let a = objective(&cfg, &ch, &f);
        let b = objective(&cfg, &ch, &f.rotated(theta));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn objective_is_sum_of_group_minima((cfg, ch, f, _t) in arb_instance()) {
        let rates = user_rates(&cfg, &ch, &f);
        let expect: f64 = (0..cfg.n_groups())
            .map(|g| cfg.members(g).iter().map(|&k| rates[k]).fold(f64::INFINITY, f64::min))
            .sum();
        prop_assert_eq!(objective(&cfg, &ch, &f), expect);
        let mut seen: Vec<usize> = (0..cfg.n_groups()).flat_map(|g| cfg.members(g).to_vec()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..cfg.n_users()).collect::<Vec<_>>());
    }

    #[test]
    fn rate_grows_with_own_group_power((cfg, ch, f, _t) in arb_instance(), scale in 1.0f64..4.0) {
        // scaling only the own-group block raises the signal, leaves interference alone
        let k = 0;
        let own = cfg.group_of(k);
        let n = cfg.n_elements();
        let mut data = f.as_slice().to_vec();
        data[own * n..(own + 1) * n].iter_mut().for_each(|z| *z *= scale);
        let g = Beamformer::from_vec(n, cfg.n_groups(), data).unwrap();
        prop_assert!(user_rate(&cfg, &ch, &g, k).unwrap() >= user_rate(&cfg, &ch, &f, k).unwrap() - 1e-15);
    }

    #[test]
    fn more_noise_never_helps(seed in any::<u64>(), extra in 0.0f64..5.0) {
        let mut r = rng(seed);
        let (cfg, ch) = instance(&mut r, 3, 2, 2, 1.0);
        let f = feasible_beamformer(&mut r, &cfg);
        let noisier = ChannelSet::new(
            ch.channels().to_vec(),
            ch.noises().iter().map(|s| s + extra).collect(),
        ).unwrap();
        prop_assert!(objective(&cfg, &noisier, &f) <= objective(&cfg, &ch, &f) + 1e-15);
    }
}

#[test]
fn gaussian_helper_has_unit_power() {
    let mut r = rng(0);
    let m: f64 = (0..200_000).map(|_| cgauss(&mut r).norm_sqr()).sum::<f64>() / 200_000.0;
    assert!((m - 1.0).abs() < 0.01);
}
