//! Exact-enumeration checks of the fusion formulas.
//!
//! Each check compares a closed-form quantity with an independent route:
//! summing the joint pmf over all `2^K` reports, differentiating the
//! log-likelihood numerically, or evaluating the alternative algebraic form.
//! They back the `validate` command and are cheap enough to run anywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{noncentrality, noncentrality_optimized};
use crate::error::Result;
use crate::fusion::{alpha_k, fisher_information, log_likelihood, score, GridSpec, RaoFusion};
use crate::noise::NoiseModel;
use crate::scene::{Attenuation, BitReport, Point, Region, Scene};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub worst_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, cases: usize, worst_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            cases,
            worst_error,
            tolerance,
            passed: worst_error <= tolerance,
        }
    }
}

/// Random scene on `[0, 1]²` with `k` sensors and mixed noise families.
pub fn random_scene<R: Rng>(rng: &mut R, k: usize, zero_tau: bool) -> Scene {
    let region = Region::unit(2);
    let sensors = (0..k).map(|_| region.sample_uniform(rng)).collect();
    let noise = (0..k)
        .map(|_| {
            let scale = rng.random_range(0.5..2.0);
            match rng.random_range(0..4) {
                0 => NoiseModel::gaussian(scale),
                1 => NoiseModel::laplace(scale),
                2 => NoiseModel::generalized_gaussian(scale, rng.random_range(0.6..2.0)),
                _ => NoiseModel::cauchy(scale),
            }
            .expect("valid parameters")
        })
        .collect();
    let taus = (0..k)
        .map(|_| if zero_tau { 0.0 } else { rng.random_range(-1.0..1.0) })
        .collect();
    let pes = (0..k).map(|_| rng.random_range(0.0..0.4)).collect();
    let att = Attenuation::new(rng.random_range(0.15..0.5), rng.random_range(2.0..4.0)).expect("valid");
    Scene::new(sensors, noise, taus, pes, att, region).expect("valid scene")
}

/// `Σ_b̂ P(b̂; θ, x_T) = 1` over all reports, `K ≤ 8`.
pub fn likelihood_normalization(seed: u64, scenes: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..scenes {
        let k = rng.random_range(1..=8);
        let scene = random_scene(&mut rng, k, false);
        let theta = rng.random_range(-3.0..3.0);
        let x = scene.region().sample_uniform(&mut rng);
        let mut total = 0.0;
        for mask in 0..(1u64 << k) {
            total += log_likelihood(&BitReport::from_mask(mask, k), theta, &x, &scene)?.exp();
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(CheckOutcome::new("likelihood normalization", scenes, worst, 1e-12))
}

/// `I(θ, x_T)` against the exact expectation of the squared score, summed
/// over the joint pmf of all `2^K` reports.
pub fn fisher_brute_force(seed: u64, scenes: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..scenes {
        let k = rng.random_range(1..=8);
        let scene = random_scene(&mut rng, k, false);
        let theta = rng.random_range(-2.0..2.0);
        let x = scene.region().sample_uniform(&mut rng);
        let alpha: Vec<f64> = (0..k).map(|i| alpha_k(theta, &x, i, &scene)).collect();
        // dα/dθ = (1 − 2P_e) p(τ − θg) g
        let dalpha: Vec<f64> = (0..k)
            .map(|i| {
                let g = scene.gain(&x, i);
                (1.0 - 2.0 * scene.pes()[i]) * scene.noise()[i].pdf(scene.taus()[i] - theta * g) * g
            })
            .collect();
        let mut expectation = 0.0;
        for mask in 0..(1u64 << k) {
            let mut prob = 1.0;
            let mut s = 0.0;
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    prob *= alpha[i];
                    s += dalpha[i] / alpha[i];
                } else {
                    prob *= 1.0 - alpha[i];
                    s -= dalpha[i] / (1.0 - alpha[i]);
                }
            }
            expectation += prob * s * s;
        }
        let fi = fisher_information(theta, &x, &scene);
        worst = worst.max((fi - expectation).abs() / fi.abs().max(1.0));
    }
    Ok(CheckOutcome::new(
        "fisher information vs exact E[score^2]",
        scenes,
        worst,
        1e-10,
    ))
}

/// Score against the central difference of the log-likelihood at `θ = 0`.
pub fn score_finite_difference(seed: u64, cases: usize) -> Result<CheckOutcome> {
    const STEP: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let k = rng.random_range(1..=12);
        let scene = random_scene(&mut rng, k, false);
        let x = scene.region().sample_uniform(&mut rng);
        let report = BitReport::new((0..k).map(|_| rng.random::<bool>()).collect());
        let s = score(&report, &x, &scene)?;
        let fd =
            (log_likelihood(&report, STEP, &x, &scene)? - log_likelihood(&report, -STEP, &x, &scene)?) / (2.0 * STEP);
        worst = worst.max((s - fd).abs() / s.abs().max(1.0));
    }
    Ok(CheckOutcome::new("score vs finite difference", cases, worst, 1e-6))
}

/// Threshold-optimized statistic against the general one at `τ = 0`.
pub fn optimized_statistic_identity(seed: u64, cases: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let k = rng.random_range(1..=49);
        let scene = random_scene(&mut rng, k, true);
        let positions: Vec<Point> = (0..25).map(|_| scene.region().sample_uniform(&mut rng)).collect();
        let grid = GridSpec::new(positions, vec![0.0])?;
        let general = RaoFusion::new(&scene, &grid)?;
        let optimized = RaoFusion::optimized(&scene, &grid)?;
        for _ in 0..8 {
            let report = BitReport::new((0..k).map(|_| rng.random::<bool>()).collect());
            let a = general.profile(&report)?;
            let b = optimized.profile(&report)?;
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).abs() / x.abs().max(1.0));
            }
        }
    }
    Ok(CheckOutcome::new(
        "optimized Rao identity at tau=0",
        cases,
        worst,
        1e-12,
    ))
}

/// Optimized non-centrality against `θ₁² I(0, x_T)` at `τ = 0`.
pub fn optimized_noncentrality_identity(seed: u64, cases: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let k = rng.random_range(1..=49);
        let scene = random_scene(&mut rng, k, true);
        let x = scene.region().sample_uniform(&mut rng);
        let theta = rng.random_range(-5.0..5.0);
        let a = noncentrality(theta, &x, &scene);
        let b = noncentrality_optimized(theta, &x, &scene)?;
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok(CheckOutcome::new(
        "optimized non-centrality identity at tau=0",
        cases,
        worst,
        1e-12,
    ))
}

/// Exact null mean of the clairvoyant Rao statistic, which equals 1.
pub fn clairvoyant_null_mean(seed: u64, scenes: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..scenes {
        let k = rng.random_range(1..=10);
        let scene = random_scene(&mut rng, k, false);
        let x = scene.region().sample_uniform(&mut rng);
        let grid = GridSpec::single_position(x.clone());
        let engine = RaoFusion::new(&scene, &grid)?;
        let mut mean = 0.0;
        for mask in 0..(1u64 << k) {
            let report = BitReport::from_mask(mask, k);
            let p = log_likelihood(&report, 0.0, &x, &scene)?.exp();
            mean += p * engine.evaluate(&report)?.value;
        }
        worst = worst.max((mean - 1.0).abs());
    }
    Ok(CheckOutcome::new("clairvoyant Rao null mean", scenes, worst, 1e-10))
}

/// Every check with its default case count.
pub fn run_all(seed: u64) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        likelihood_normalization(seed, 20)?,
        fisher_brute_force(seed ^ 1, 20)?,
        score_finite_difference(seed ^ 2, 50)?,
        optimized_statistic_identity(seed ^ 3, 20)?,
        optimized_noncentrality_identity(seed ^ 4, 50)?,
        clairvoyant_null_mean(seed ^ 5, 20)?,
    ])
}
