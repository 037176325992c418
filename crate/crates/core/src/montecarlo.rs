//! Reproducible Monte Carlo experiments.
//!
//! Trial `t` of every experiment draws from the ChaCha8 stream keyed by
//! `(master_seed, purpose, t)` (see [`crate::rng`]), so outputs are a pure
//! function of the configuration whatever the thread schedule. Thresholds
//! are calibrated on one null sample and validated on a disjoint one.
//!
//! Sweeps reuse the master seed across their cells, so all cells share
//! common random numbers and differences between cells carry less noise than
//! the individual estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{rao_statistic_at, GlrFusion, GridSpec, RaoFusion};
use crate::rng::{Purpose, TrialStreams};
use crate::scene::{BitReport, Point, Scene, TargetState};

const BATCH: usize = 128;

/// Minimum expected number of null exceedances for a calibration.
pub const MIN_TAIL_COUNT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "glr")]
    Glr,
    #[serde(rename = "grao")]
    GRao,
    #[serde(rename = "grao-opt")]
    GRaoOptimized,
    #[serde(rename = "clairvoyant-rao")]
    ClairvoyantRao,
}

impl Rule {
    pub fn key(self) -> &'static str {
        match self {
            Rule::Glr => "glr",
            Rule::GRao => "grao",
            Rule::GRaoOptimized => "grao-opt",
            Rule::ClairvoyantRao => "clairvoyant-rao",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glr" => Ok(Rule::Glr),
            "grao" => Ok(Rule::GRao),
            "grao-opt" => Ok(Rule::GRaoOptimized),
            "clairvoyant-rao" => Ok(Rule::ClairvoyantRao),
            other => Err(Error::InvalidConfig(format!("unknown rule `{other}`"))),
        }
    }
}

/// Where the target sits in each trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetDraw {
    Fixed(Point),
    Uniform,
}

impl TargetDraw {
    fn draw<R: rand::Rng + ?Sized>(&self, scene: &Scene, rng: &mut R) -> Point {
        match self {
            TargetDraw::Fixed(p) => p.clone(),
            TargetDraw::Uniform => scene.region().sample_uniform(rng),
        }
    }
}

/// A fusion rule bound to one scene and search grid.
#[derive(Debug, Clone)]
pub enum Detector {
    Rao(RaoFusion),
    Glr(GlrFusion),
    /// Rao statistic at the true (or, under the null, the drawn) position.
    Clairvoyant,
}

impl Detector {
    pub fn new(rule: Rule, scene: &Scene, grid: &GridSpec) -> Result<Self> {
        Ok(match rule {
            Rule::Glr => Detector::Glr(GlrFusion::new(scene, grid)?),
            Rule::GRao => Detector::Rao(RaoFusion::new(scene, grid)?),
            Rule::GRaoOptimized => Detector::Rao(RaoFusion::optimized(scene, grid)?),
            Rule::ClairvoyantRao => Detector::Clairvoyant,
        })
    }

    pub fn evaluate_batch(&self, scene: &Scene, reports: &[BitReport], positions: &[Point]) -> Result<Vec<f64>> {
        match self {
            Detector::Rao(engine) => reports.iter().map(|r| engine.evaluate(r).map(|s| s.value)).collect(),
            Detector::Glr(engine) => Ok(engine.evaluate_batch(reports)?.into_iter().map(|s| s.value).collect()),
            Detector::Clairvoyant => reports
                .iter()
                .zip(positions)
                .map(|(r, p)| rao_statistic_at(r, p, scene))
                .collect(),
        }
    }
}

/// Scene, detector and target law: everything needed to simulate the
/// statistic under either hypothesis.
#[derive(Debug, Clone)]
pub struct Experiment {
    scene: Scene,
    rule: Rule,
    detector: Detector,
    draw: TargetDraw,
}

impl Experiment {
    pub fn new(rule: Rule, scene: &Scene, grid: &GridSpec, draw: TargetDraw) -> Result<Self> {
        if let TargetDraw::Fixed(p) = &draw {
            if !scene.region().contains(p) {
                return Err(Error::InvalidConfig(format!(
                    "target {:?} lies outside the region",
                    p.0
                )));
            }
        }
        Ok(Self {
            scene: scene.clone(),
            rule,
            detector: Detector::new(rule, scene, grid)?,
            draw,
        })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    /// Same detector, different target law.
    pub fn with_draw(&self, draw: TargetDraw) -> Self {
        Self { draw, ..self.clone() }
    }

    /// Simulated report for trial `t`: position first, then measurements and
    /// channel flips. `θ = 0` reproduces the null report of the same stream.
    pub fn simulate_report(&self, theta: f64, streams: &TrialStreams, t: u64) -> (BitReport, Point) {
        let mut rng = streams.trial(t);
        let position = self.draw.draw(&self.scene, &mut rng);
        let target = TargetState::new(theta, position);
        let report = self.scene.observe(Some(&target), &mut rng);
        (report, target.position)
    }

    /// Statistic values for trials `0..trials` in trial order.
    pub fn statistics(&self, theta: f64, trials: usize, streams: TrialStreams) -> Result<Vec<f64>> {
        let batches = trials.div_ceil(BATCH);
        let out: Vec<Vec<f64>> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let range = b * BATCH..((b + 1) * BATCH).min(trials);
                let (reports, positions): (Vec<_>, Vec<_>) =
                    range.map(|t| self.simulate_report(theta, &streams, t as u64)).unzip();
                self.detector.evaluate_batch(&self.scene, &reports, &positions)
            })
            .collect::<Result<_>>()?;
        Ok(out.into_iter().flatten().collect())
    }

    pub fn null_statistics(&self, trials: usize, master_seed: u64, purpose: Purpose) -> Result<Vec<f64>> {
        self.statistics(0.0, trials, TrialStreams::new(master_seed, purpose))
    }
}

/// Binomial standard error `√(p(1−p)/n)`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

fn exceedance(sorted: &[f64], gamma: f64) -> usize {
    sorted.len() - sorted.partition_point(|&v| v <= gamma)
}

fn sort_sample(mut s: Vec<f64>) -> Vec<f64> {
    s.sort_by(f64::total_cmp);
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub pf_target: f64,
    /// Decide H1 when `Λ > gamma`.
    pub gamma: f64,
    /// Exceedance rate of `gamma` on the calibration sample (≤ target).
    pub achieved_pf: f64,
    pub achieved_pf_se: f64,
    pub trials: usize,
    pub seed: u64,
}

fn check_pf(pf: f64) -> Result<()> {
    if !(pf > 0.0 && pf < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "false-alarm target must lie in (0, 1), got {pf}"
        )));
    }
    Ok(())
}

fn check_tail(pf: f64, trials: usize) -> Result<()> {
    let product = pf * trials as f64;
    if product < MIN_TAIL_COUNT - 1e-9 {
        return Err(Error::InsufficientTrials { product });
    }
    Ok(())
}

/// Smallest sampled value `v` with `#{Λ > v}/n ≤ pf` on an ascending sample.
pub fn threshold_from_sorted(sorted: &[f64], pf: f64) -> Result<(f64, f64)> {
    check_pf(pf)?;
    let n = sorted.len();
    if n == 0 {
        return Err(Error::InsufficientTrials { product: 0.0 });
    }
    let allowed = ((pf * n as f64) + 1e-9).floor() as usize;
    let allowed = allowed.min(n - 1);
    let gamma = sorted[n - allowed - 1];
    let achieved = exceedance(sorted, gamma) as f64 / n as f64;
    Ok((gamma, achieved))
}

/// Calibrate thresholds for several false-alarm targets on one null sample.
pub fn calibrate_levels(exp: &Experiment, pfs: &[f64], trials: usize, master_seed: u64) -> Result<Vec<Calibration>> {
    for &pf in pfs {
        check_pf(pf)?;
        check_tail(pf, trials)?;
    }
    let sample = sort_sample(exp.null_statistics(trials, master_seed, Purpose::Calibration)?);
    pfs.iter()
        .map(|&pf| {
            let (gamma, achieved) = threshold_from_sorted(&sample, pf)?;
            Ok(Calibration {
                pf_target: pf,
                gamma,
                achieved_pf: achieved,
                achieved_pf_se: binomial_se(achieved, trials),
                trials,
                seed: master_seed,
            })
        })
        .collect()
}

pub fn calibrate_threshold(exp: &Experiment, pf0: f64, trials: usize, master_seed: u64) -> Result<Calibration> {
    Ok(calibrate_levels(exp, &[pf0], trials, master_seed)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdEstimate {
    pub pd: f64,
    pub se: f64,
    pub trials: usize,
}

fn rate_above(sample: &[f64], gamma: f64) -> PdEstimate {
    let hits = sample.iter().filter(|&&v| v > gamma).count();
    let pd = hits as f64 / sample.len().max(1) as f64;
    PdEstimate {
        pd,
        se: binomial_se(pd, sample.len()),
        trials: sample.len(),
    }
}

/// Fraction of alternative trials with `Λ > gamma`.
pub fn estimate_pd(exp: &Experiment, theta: f64, gamma: f64, trials: usize, master_seed: u64) -> Result<PdEstimate> {
    let sample = exp.statistics(theta, trials, TrialStreams::new(master_seed, Purpose::Detection))?;
    Ok(rate_above(&sample, gamma))
}

/// Detection probabilities at several thresholds from one alternative sample.
pub fn estimate_pd_levels(
    exp: &Experiment,
    theta: f64,
    gammas: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<Vec<PdEstimate>> {
    let sample = exp.statistics(theta, trials, TrialStreams::new(master_seed, Purpose::Detection))?;
    Ok(gammas.iter().map(|&g| rate_above(&sample, g)).collect())
}

/// False-alarm rate of `gamma` on a fresh null sample, disjoint from the
/// calibration sample.
pub fn validate_threshold(exp: &Experiment, gamma: f64, trials: usize, master_seed: u64) -> Result<PdEstimate> {
    let sample = exp.null_statistics(trials, master_seed, Purpose::Validation)?;
    Ok(rate_above(&sample, gamma))
}

/// Trial budget and seed of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub master_seed: u64,
    pub pf_targets: Vec<f64>,
    pub rule: Rule,
    pub target_draw: TargetDraw,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_h0 == 0 || self.trials_h1 == 0 {
            return Err(Error::InvalidConfig("trial counts must be positive".into()));
        }
        if self.pf_targets.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one false-alarm target is required".into(),
            ));
        }
        for &pf in &self.pf_targets {
            check_pf(pf)?;
        }
        Ok(())
    }
}

/// One calibrated operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub rule: Rule,
    pub theta: f64,
    pub pf_target: f64,
    pub gamma: f64,
    pub achieved_pf: f64,
    pub achieved_pf_se: f64,
    pub pd: f64,
    pub pd_se: f64,
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub master_seed: u64,
}

/// Calibrate at every target of `cfg` and estimate `P_D` at amplitude `theta`.
pub fn run(cfg: &McConfig, scene: &Scene, grid: &GridSpec, theta: f64) -> Result<Vec<McResult>> {
    cfg.validate()?;
    let exp = Experiment::new(cfg.rule, scene, grid, cfg.target_draw.clone())?;
    run_experiment(
        &exp,
        &cfg.pf_targets,
        theta,
        cfg.trials_h0,
        cfg.trials_h1,
        cfg.master_seed,
    )
}

fn run_experiment(
    exp: &Experiment,
    pfs: &[f64],
    theta: f64,
    trials_h0: usize,
    trials_h1: usize,
    seed: u64,
) -> Result<Vec<McResult>> {
    let cals = calibrate_levels(exp, pfs, trials_h0, seed)?;
    let gammas: Vec<f64> = cals.iter().map(|c| c.gamma).collect();
    let pds = estimate_pd_levels(exp, theta, &gammas, trials_h1, seed)?;
    Ok(cals
        .iter()
        .zip(pds)
        .map(|(c, pd)| McResult {
            rule: exp.rule(),
            theta,
            pf_target: c.pf_target,
            gamma: c.gamma,
            achieved_pf: c.achieved_pf,
            achieved_pf_se: c.achieved_pf_se,
            pd: pd.pd,
            pd_se: pd.se,
            trials_h0,
            trials_h1,
            master_seed: seed,
        })
        .collect())
}

/// Trial counts shared by the sweeps, with an optional reduced budget for
/// the (much slower) GLR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBudget {
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub glr_trials_h0: Option<usize>,
    pub glr_trials_h1: Option<usize>,
    pub master_seed: u64,
}

impl SweepBudget {
    pub fn trials_for(&self, rule: Rule) -> (usize, usize) {
        match rule {
            Rule::Glr => (
                self.glr_trials_h0.unwrap_or(self.trials_h0),
                self.glr_trials_h1.unwrap_or(self.trials_h1),
            ),
            _ => (self.trials_h0, self.trials_h1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub rule: Rule,
    pub tau: f64,
    pub snr_db: f64,
    pub polarity: i8,
    pub pf_target: f64,
    pub gamma: f64,
    pub achieved_pf: f64,
    pub pd: f64,
    pub pd_se: f64,
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub master_seed: u64,
}

/// `P_D` versus a common threshold `τ` applied at every sensor. Each `τ`
/// gets its own calibration; every `(SNR, polarity)` pair is then estimated
/// against it.
#[allow(clippy::too_many_arguments)]
pub fn sweep_tau(
    scene: &Scene,
    grid: &GridSpec,
    rules: &[Rule],
    taus: &[f64],
    snr_db: &[f64],
    polarities: &[i8],
    pfs: &[f64],
    draw: &TargetDraw,
    budget: &SweepBudget,
) -> Result<Vec<TauRow>> {
    let power = noise_power(scene);
    let mut rows = Vec::new();
    for &rule in rules {
        let (h0, h1) = budget.trials_for(rule);
        for &tau in taus {
            let s = scene.with_common_tau(tau);
            let exp = Experiment::new(rule, &s, grid, draw.clone())?;
            let cals = calibrate_levels(&exp, pfs, h0, budget.master_seed)?;
            let gammas: Vec<f64> = cals.iter().map(|c| c.gamma).collect();
            for &snr in snr_db {
                for &pol in polarities {
                    let theta = f64::from(pol.signum()) * crate::fusion::snr_db_to_amplitude(snr, power);
                    let pds = estimate_pd_levels(&exp, theta, &gammas, h1, budget.master_seed)?;
                    for (c, pd) in cals.iter().zip(pds) {
                        rows.push(TauRow {
                            rule,
                            tau,
                            snr_db: snr,
                            polarity: pol.signum(),
                            pf_target: c.pf_target,
                            gamma: c.gamma,
                            achieved_pf: c.achieved_pf,
                            pd: pd.pd,
                            pd_se: pd.se,
                            trials_h0: h0,
                            trials_h1: h1,
                            master_seed: budget.master_seed,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrRow {
    pub rule: Rule,
    pub pe: f64,
    pub pf_target: f64,
    pub snr_db: f64,
    pub gamma: f64,
    pub achieved_pf: f64,
    pub pd: f64,
    pub pd_se: f64,
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub master_seed: u64,
}

/// `P_D` versus SNR at a common bit-error probability `pe`: one calibration
/// per rule, then one alternative sample per SNR.
#[allow(clippy::too_many_arguments)]
pub fn sweep_snr(
    scene: &Scene,
    grid: &GridSpec,
    rules: &[Rule],
    snr_db: &[f64],
    pfs: &[f64],
    pe: f64,
    polarity: i8,
    draw: &TargetDraw,
    budget: &SweepBudget,
) -> Result<Vec<SnrRow>> {
    let s = scene.with_common_pe(pe)?;
    let power = noise_power(&s);
    let mut rows = Vec::new();
    for &rule in rules {
        let (h0, h1) = budget.trials_for(rule);
        let exp = Experiment::new(rule, &s, grid, draw.clone())?;
        let cals = calibrate_levels(&exp, pfs, h0, budget.master_seed)?;
        let gammas: Vec<f64> = cals.iter().map(|c| c.gamma).collect();
        for &snr in snr_db {
            let theta = f64::from(polarity.signum()) * crate::fusion::snr_db_to_amplitude(snr, power);
            let pds = estimate_pd_levels(&exp, theta, &gammas, h1, budget.master_seed)?;
            for (c, pd) in cals.iter().zip(pds) {
                rows.push(SnrRow {
                    rule,
                    pe,
                    pf_target: c.pf_target,
                    snr_db: snr,
                    gamma: c.gamma,
                    achieved_pf: c.achieved_pf,
                    pd: pd.pd,
                    pd_se: pd.se,
                    trials_h0: h0,
                    trials_h1: h1,
                    master_seed: budget.master_seed,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatRow {
    pub rule: Rule,
    pub x: f64,
    pub y: f64,
    pub pf_target: f64,
    pub gamma: f64,
    pub pd: f64,
    pub se: f64,
    pub trials_h1: usize,
    pub master_seed: u64,
}

/// `P_D` per fixed target position. The null law does not depend on the
/// target, so one calibration per rule serves the whole lattice.
#[allow(clippy::too_many_arguments)]
pub fn heatmap_pd(
    scene: &Scene,
    grid: &GridSpec,
    rules: &[Rule],
    positions: &[Point],
    snr_db: f64,
    pf: f64,
    budget: &SweepBudget,
) -> Result<Vec<HeatRow>> {
    let theta = crate::fusion::snr_db_to_amplitude(snr_db, noise_power(scene));
    let mut rows = Vec::new();
    for &rule in rules {
        let (h0, h1) = budget.trials_for(rule);
        let base = Experiment::new(rule, scene, grid, TargetDraw::Uniform)?;
        let cal = calibrate_threshold(&base, pf, h0, budget.master_seed)?;
        for p in positions {
            let exp = base.with_draw(TargetDraw::Fixed(p.clone()));
            let pd = estimate_pd(&exp, theta, cal.gamma, h1, budget.master_seed)?;
            rows.push(HeatRow {
                rule,
                x: p.coords().first().copied().unwrap_or(f64::NAN),
                y: p.coords().get(1).copied().unwrap_or(f64::NAN),
                pf_target: pf,
                gamma: cal.gamma,
                pd: pd.pd,
                se: pd.se,
                trials_h1: h1,
                master_seed: budget.master_seed,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub gamma: f64,
    pub pf: f64,
    pub pd: f64,
}

/// Empirical ROC from joint null/alternative samples, sweeping the threshold
/// over `n_points` null order statistics. The first point uses `γ = −∞`
/// (always decide H1), the last the null maximum.
pub fn roc_from_samples(null: Vec<f64>, alt: Vec<f64>, n_points: usize) -> Vec<RocPoint> {
    let null = sort_sample(null);
    let alt = sort_sample(alt);
    let n = null.len();
    let point = |gamma: f64| RocPoint {
        gamma,
        pf: exceedance(&null, gamma) as f64 / n.max(1) as f64,
        pd: exceedance(&alt, gamma) as f64 / alt.len().max(1) as f64,
    };
    let mut out = vec![point(f64::NEG_INFINITY)];
    if n == 0 {
        return out;
    }
    let steps = n_points.max(1);
    let mut last = None;
    for q in 1..=steps {
        let idx = ((q as f64 / steps as f64) * (n - 1) as f64).round() as usize;
        if last == Some(idx) {
            continue;
        }
        last = Some(idx);
        out.push(point(null[idx]));
    }
    out
}

pub fn roc(
    exp: &Experiment,
    theta: f64,
    n_points: usize,
    trials_h0: usize,
    trials_h1: usize,
    master_seed: u64,
) -> Result<Vec<RocPoint>> {
    let null = exp.null_statistics(trials_h0, master_seed, Purpose::Calibration)?;
    let alt = exp.statistics(theta, trials_h1, TrialStreams::new(master_seed, Purpose::Detection))?;
    Ok(roc_from_samples(null, alt, n_points))
}

/// Reference noise power of a scene (mean over sensors).
pub fn noise_power(scene: &Scene) -> f64 {
    scene.noise().iter().map(|n| n.power()).sum::<f64>() / scene.num_sensors() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::default_grids;
    use crate::noise::NoiseModel;
    use crate::scene::Region;

    fn small_setup() -> (Scene, GridSpec) {
        let scene = Scene::reference_network(NoiseModel::gaussian(1.0).unwrap(), 0.0, 0.0).unwrap();
        let grid = default_grids(&Region::unit(2), 8, &[-5.0, 0.0, 5.0, 10.0], 1.0).unwrap();
        (scene, grid)
    }

    #[test]
    fn threshold_selection_is_conservative() {
        let sorted: Vec<f64> = (0..1000).map(f64::from).collect();
        let (g, pf) = threshold_from_sorted(&sorted, 0.01).unwrap();
        assert_eq!(g, 989.0);
        assert!((pf - 0.01).abs() < 1e-15);
        // Ties at the cut push the threshold down to the smallest valid value.
        let mut tied = vec![0.0; 980];
        tied.extend(std::iter::repeat_n(5.0, 20));
        let (g, pf) = threshold_from_sorted(&tied, 0.01).unwrap();
        assert_eq!(g, 5.0);
        assert_eq!(pf, 0.0);
        assert!(threshold_from_sorted(&sorted, 1.0).is_err());
        assert!(threshold_from_sorted(&sorted, 0.0).is_err());
    }

    #[test]
    fn calibration_needs_tail_resolution() {
        let (scene, grid) = small_setup();
        let exp = Experiment::new(Rule::GRao, &scene, &grid, TargetDraw::Uniform).unwrap();
        assert!(matches!(
            calibrate_threshold(&exp, 0.01, 5_000, 1),
            Err(Error::InsufficientTrials { .. })
        ));
    }

    #[test]
    fn statistics_are_deterministic_and_thread_independent() {
        let (scene, grid) = small_setup();
        let exp = Experiment::new(Rule::Glr, &scene, &grid, TargetDraw::Uniform).unwrap();
        let a = exp
            .statistics(1.0, 300, TrialStreams::new(9, Purpose::Detection))
            .unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool
            .install(|| exp.statistics(1.0, 300, TrialStreams::new(9, Purpose::Detection)))
            .unwrap();
        assert_eq!(a, b);
        // Batch boundaries must not matter either.
        let first = exp
            .statistics(1.0, 5, TrialStreams::new(9, Purpose::Detection))
            .unwrap();
        assert_eq!(&a[..5], &first[..]);
    }

    #[test]
    fn roc_shape() {
        let null: Vec<f64> = (0..500).map(|i| i as f64 / 500.0).collect();
        let alt: Vec<f64> = (0..500).map(|i| 0.3 + i as f64 / 500.0).collect();
        let pts = roc_from_samples(null, alt, 50);
        assert_eq!((pts[0].pf, pts[0].pd), (1.0, 1.0));
        let last = pts.last().unwrap();
        assert_eq!(last.pf, 0.0);
        for w in pts.windows(2) {
            assert!(w[1].gamma >= w[0].gamma);
            assert!(w[1].pf <= w[0].pf && w[1].pd <= w[0].pd);
        }
    }

    #[test]
    fn rule_keys_round_trip() {
        for r in [Rule::Glr, Rule::GRao, Rule::GRaoOptimized, Rule::ClairvoyantRao] {
            assert_eq!(r.key().parse::<Rule>().unwrap(), r);
        }
        assert!("wald".parse::<Rule>().is_err());
    }

    #[test]
    fn mc_config_validation() {
        let cfg = McConfig {
            trials_h0: 10_000,
            trials_h1: 100,
            master_seed: 1,
            pf_targets: vec![1.0],
            rule: Rule::GRao,
            target_draw: TargetDraw::Uniform,
        };
        assert!(cfg.validate().is_err());
        let cfg = McConfig {
            pf_targets: vec![0.05],
            trials_h1: 0,
            ..cfg
        };
        assert!(cfg.validate().is_err());
    }
}
