//! Fusion-center statistics.
//!
//! The per-sensor probability of receiving a one is
//!
//! ```text
//! β_k(θ, x_T) = F_k(τ_k − θ g(x_T, x_k))
//! α_k(θ, x_T) = (1 − P_e,k) β_k + P_e,k (1 − β_k)
//! ```
//!
//! with `F_k` the noise complementary CDF. Everything else (likelihood,
//! score, Fisher information, the GLR and generalized Rao statistics) is
//! built from `α_k`.
//!
//! Grid statistics are evaluated by precomputed engines, [`RaoFusion`] and
//! [`GlrFusion`], which hold the gain table for one `(scene, grid)` pair and
//! are reused across reports. Per report, the generalized Rao statistic is a
//! gain-matrix product plus a max, `O(K·N_x)`; the GLR adds the amplitude
//! axis, `O(K·N_x·N_θ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{BitReport, Placement, Point, Region, Scene};

/// `α_k` is clamped to `[ALPHA_CLAMP, 1 − ALPHA_CLAMP]` before logs and
/// divisions.
pub const ALPHA_CLAMP: f64 = 1e-12;

fn clamp_alpha(a: f64) -> f64 {
    a.clamp(ALPHA_CLAMP, 1.0 - ALPHA_CLAMP)
}

fn bsc(pe: f64, beta: f64) -> f64 {
    (1.0 - pe) * beta + pe * (1.0 - beta)
}

/// Search grid over target positions and amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    positions: Vec<Point>,
    thetas: Vec<f64>,
    #[serde(skip)]
    zero_index: usize,
}

impl GridSpec {
    pub fn new(positions: Vec<Point>, thetas: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidGrid("at least one position is required".into()));
        }
        let dim = positions[0].dim();
        if positions.iter().any(|p| p.dim() != dim) {
            return Err(Error::InvalidGrid("positions have mixed dimensions".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("amplitudes must be finite".into()));
        }
        let zeros: Vec<usize> = thetas
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == 0.0)
            .map(|(j, _)| j)
            .collect();
        if zeros.len() != 1 {
            return Err(Error::InvalidGrid(format!(
                "amplitudes must contain 0 exactly once, found {} zeros",
                zeros.len()
            )));
        }
        Ok(Self {
            positions,
            thetas,
            zero_index: zeros[0],
        })
    }

    /// Grid with a single position and only `θ = 0`; handy for clairvoyant
    /// statistics.
    pub fn single_position(position: Point) -> Self {
        Self {
            positions: vec![position],
            thetas: vec![0.0],
            zero_index: 0,
        }
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    pub fn num_thetas(&self) -> usize {
        self.thetas.len()
    }

    pub fn zero_index(&self) -> usize {
        self.zero_index
    }

    pub fn with_thetas(&self, thetas: Vec<f64>) -> Result<Self> {
        Self::new(self.positions.clone(), thetas)
    }

    fn check_against(&self, scene: &Scene) -> Result<()> {
        let region = scene.region();
        if let Some(p) = self.positions.iter().find(|p| !region.contains(p)) {
            return Err(Error::InvalidGrid(format!(
                "position {:?} lies outside the region",
                p.0
            )));
        }
        Ok(())
    }
}

/// Amplitude whose SNR `10·log10(θ²/P_w)` equals `snr_db`.
pub fn snr_db_to_amplitude(snr_db: f64, noise_power: f64) -> f64 {
    (noise_power * 10f64.powf(snr_db / 10.0)).sqrt()
}

/// `Nc²` positions sampling the region (boundary included) and the
/// amplitude grid `[−g, 0, g]` where `g` lists the amplitudes of `snr_db`.
pub fn default_grids(region: &Region, nc: usize, snr_db: &[f64], noise_power: f64) -> Result<GridSpec> {
    if nc == 0 {
        return Err(Error::InvalidGrid("Nc must be at least 1".into()));
    }
    let g: Vec<f64> = snr_db.iter().map(|&s| snr_db_to_amplitude(s, noise_power)).collect();
    let thetas = g
        .iter()
        .map(|a| -a)
        .chain(std::iter::once(0.0))
        .chain(g.iter().copied())
        .collect();
    GridSpec::new(region.lattice(nc, Placement::Boundary), thetas)
}

/// `−10:1:20` dB.
pub fn default_snr_range() -> Vec<f64> {
    (-10..=20).map(f64::from).collect()
}

/// Value and maximizer of a grid statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticResult {
    pub value: f64,
    pub argmax_position: usize,
    /// Amplitude index of the ML estimate; GLR only.
    pub argmax_theta: Option<usize>,
}

/// `Pr{b̂_k = 1; θ, x_T}`.
pub fn alpha_k(theta: f64, x_t: &Point, k: usize, scene: &Scene) -> f64 {
    let g = scene.gain(x_t, k);
    let beta = scene.noise()[k].ccdf(scene.taus()[k] - theta * g);
    bsc(scene.pes()[k], beta)
}

/// `α_k` under the null (`θ = 0`), independent of position.
pub fn alpha_k0(k: usize, scene: &Scene) -> f64 {
    bsc(scene.pes()[k], scene.noise()[k].ccdf(scene.taus()[k]))
}

fn check_len(report: &BitReport, scene: &Scene) -> Result<()> {
    if report.len() != scene.num_sensors() {
        return Err(Error::LengthMismatch {
            expected: scene.num_sensors(),
            got: report.len(),
        });
    }
    Ok(())
}

/// Exact log-pmf `ln P(b̂; θ, x_T)`.
pub fn log_likelihood(report: &BitReport, theta: f64, x_t: &Point, scene: &Scene) -> Result<f64> {
    check_len(report, scene)?;
    Ok(report
        .bits
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let a = clamp_alpha(alpha_k(theta, x_t, k, scene));
            if b {
                a.ln()
            } else {
                (1.0 - a).ln()
            }
        })
        .sum())
}

/// `ν_k(b)`: the per-sensor score weight at `θ = 0`, before multiplying by
/// the gain.
pub fn nu_k(bit: bool, k: usize, scene: &Scene) -> f64 {
    let a0 = clamp_alpha(alpha_k0(k, scene));
    let pe = scene.pes()[k];
    let p = scene.noise()[k].pdf(scene.taus()[k]);
    let b = if bit { 1.0 } else { 0.0 };
    (1.0 - 2.0 * pe) * p * (b - a0) / (a0 * (1.0 - a0))
}

/// `∂ ln P(b̂; θ, x_T)/∂θ` at `θ = 0`.
pub fn score(report: &BitReport, x_t: &Point, scene: &Scene) -> Result<f64> {
    check_len(report, scene)?;
    Ok(report
        .bits
        .iter()
        .enumerate()
        .map(|(k, &b)| nu_k(b, k, scene) * scene.gain(x_t, k))
        .sum())
}

/// `ψ_k(θ, x_T)`, the per-sensor Fisher information before the gain factor.
pub fn psi_k(theta: f64, x_t: &Point, k: usize, scene: &Scene) -> f64 {
    let g = scene.gain(x_t, k);
    let pe = scene.pes()[k];
    let noise = &scene.noise()[k];
    let arg = scene.taus()[k] - theta * g;
    let a = clamp_alpha(bsc(pe, noise.ccdf(arg)));
    let p = noise.pdf(arg);
    (1.0 - 2.0 * pe).powi(2) * p * p / (a * (1.0 - a))
}

/// `ψ_k` at `θ = 0`.
pub fn psi_k0(k: usize, scene: &Scene) -> f64 {
    let pe = scene.pes()[k];
    let noise = &scene.noise()[k];
    let a = clamp_alpha(alpha_k0(k, scene));
    let p = noise.pdf(scene.taus()[k]);
    (1.0 - 2.0 * pe).powi(2) * p * p / (a * (1.0 - a))
}

/// Fisher information on θ with `x_T` known: `Σ_k ψ_k g_k²`.
pub fn fisher_information(theta: f64, x_t: &Point, scene: &Scene) -> f64 {
    (0..scene.num_sensors())
        .map(|k| psi_k(theta, x_t, k, scene) * scene.gain(x_t, k).powi(2))
        .sum()
}

/// Clairvoyant Rao statistic at a known position.
pub fn rao_statistic_at(report: &BitReport, x_t: &Point, scene: &Scene) -> Result<f64> {
    let s = score(report, x_t, scene)?;
    let fi = fisher_information(0.0, x_t, scene);
    if !(fi > 0.0 && fi.is_finite()) {
        return Err(Error::DegenerateStatistic);
    }
    Ok(s * s / fi)
}

/// Generalized Rao statistic: max over grid positions of the clairvoyant
/// Rao statistic.
pub fn grao_statistic(report: &BitReport, scene: &Scene, grid: &GridSpec) -> Result<StatisticResult> {
    RaoFusion::new(scene, grid)?.evaluate(report)
}

/// Threshold-optimized generalized Rao statistic (all `τ_k = 0`).
pub fn grao_statistic_optimized(report: &BitReport, scene: &Scene, grid: &GridSpec) -> Result<StatisticResult> {
    RaoFusion::optimized(scene, grid)?.evaluate(report)
}

/// GLR statistic by exhaustive search over `grid.thetas × grid.positions`.
pub fn glr_statistic(report: &BitReport, scene: &Scene, grid: &GridSpec) -> Result<StatisticResult> {
    GlrFusion::new(scene, grid)?.evaluate(report)
}

/// Precomputed generalized Rao statistic for one `(scene, grid)` pair.
///
/// The numerator at grid point `i` is `Σ_k ν_k(b̂_k) g_ik`, read from two
/// `[k][i]` tables (one per bit value) and summed in sensor order, so
/// complementing every bit negates it exactly when `ν_k(0) = −ν_k(1)`.
/// The statistic is `scale · N_i² / D_i` maximized over `i`; points with a
/// non-positive denominator are skipped.
#[derive(Debug, Clone)]
pub struct RaoFusion {
    num_sensors: usize,
    num_positions: usize,
    scale: f64,
    /// `[k][i]`: `ν_k(0) · g_ik`.
    weighted_zero: Vec<f64>,
    /// `[k][i]`: `ν_k(1) · g_ik`.
    weighted_one: Vec<f64>,
    /// Denominator per grid point; `None` when degenerate.
    denom: Vec<Option<f64>>,
}

impl RaoFusion {
    /// General thresholds: `ν_k(b) = (1−2P_e)p(τ)(b − α_k0)/(α_k0(1−α_k0))`,
    /// denominator `Σ ψ_k0 g²`.
    pub fn new(scene: &Scene, grid: &GridSpec) -> Result<Self> {
        grid.check_against(scene)?;
        let k_n = scene.num_sensors();
        let nu0: Vec<f64> = (0..k_n).map(|k| nu_k(false, k, scene)).collect();
        let nu1: Vec<f64> = (0..k_n).map(|k| nu_k(true, k, scene)).collect();
        let psi0: Vec<f64> = (0..k_n).map(|k| psi_k0(k, scene)).collect();
        Self::assemble(scene, grid, 1.0, &nu0, &nu1, &psi0)
    }

    /// Zero thresholds:
    /// `4[Σ (1−2P_e) p(0) g (b̂ − ½)]² / Σ (1−2P_e)² p(0)² g²`.
    pub fn optimized(scene: &Scene, grid: &GridSpec) -> Result<Self> {
        if !scene.all_taus_zero() {
            return Err(Error::NonZeroThreshold);
        }
        grid.check_against(scene)?;
        let w: Vec<f64> = (0..scene.num_sensors())
            .map(|k| (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(0.0))
            .collect();
        let half: Vec<f64> = w.iter().map(|w| 0.5 * w).collect();
        let minus_half: Vec<f64> = half.iter().map(|h| -h).collect();
        let w2: Vec<f64> = w.iter().map(|w| w * w).collect();
        Self::assemble(scene, grid, 4.0, &minus_half, &half, &w2)
    }

    fn assemble(
        scene: &Scene,
        grid: &GridSpec,
        scale: f64,
        nu0: &[f64],
        nu1: &[f64],
        denom_weight: &[f64],
    ) -> Result<Self> {
        let k_n = scene.num_sensors();
        let n = grid.num_positions();
        let mut weighted_zero = vec![0.0; k_n * n];
        let mut weighted_one = vec![0.0; k_n * n];
        let mut denom = Vec::with_capacity(n);
        for (i, pos) in grid.positions().iter().enumerate() {
            let mut d = 0.0;
            for k in 0..k_n {
                let g = scene.gain(pos, k);
                weighted_zero[k * n + i] = nu0[k] * g;
                weighted_one[k * n + i] = nu1[k] * g;
                d += denom_weight[k] * g * g;
            }
            denom.push((d > 0.0 && d.is_finite()).then_some(d));
        }
        if denom.iter().all(Option::is_none) {
            return Err(Error::DegenerateStatistic);
        }
        Ok(Self {
            num_sensors: k_n,
            num_positions: n,
            scale,
            weighted_zero,
            weighted_one,
            denom,
        })
    }

    pub fn num_positions(&self) -> usize {
        self.num_positions
    }

    /// Per-position statistic values (`NaN` where degenerate).
    pub fn profile(&self, report: &BitReport) -> Result<Vec<f64>> {
        let num = self.numerators(report)?;
        Ok(num
            .iter()
            .zip(&self.denom)
            .map(|(n, d)| d.map_or(f64::NAN, |d| self.scale * n * n / d))
            .collect())
    }

    fn numerators(&self, report: &BitReport) -> Result<Vec<f64>> {
        if report.len() != self.num_sensors {
            return Err(Error::LengthMismatch {
                expected: self.num_sensors,
                got: report.len(),
            });
        }
        let n = self.num_positions;
        let mut num = vec![0.0; n];
        for (k, &b) in report.bits.iter().enumerate() {
            let table = if b { &self.weighted_one } else { &self.weighted_zero };
            for (acc, w) in num.iter_mut().zip(&table[k * n..(k + 1) * n]) {
                *acc += w;
            }
        }
        Ok(num)
    }

    /// Maximum over grid positions; the first maximizer wins ties.
    pub fn evaluate(&self, report: &BitReport) -> Result<StatisticResult> {
        let num = self.numerators(report)?;
        let mut best: Option<(usize, f64)> = None;
        for (i, (n, d)) in num.iter().zip(&self.denom).enumerate() {
            let Some(d) = d else { continue };
            let v = self.scale * n * n / d;
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let (i, v) = best.ok_or(Error::DegenerateStatistic)?;
        Ok(StatisticResult {
            value: v,
            argmax_position: i,
            argmax_theta: None,
        })
    }
}

/// Precomputed GLR statistic for one `(scene, grid)` pair.
///
/// With `L_kij = ln α_kij − ln(1 − α_kij)` and `C_ij = Σ_k ln(1 − α_kij)`,
/// the log-likelihood at `(x_T[i], θ[j])` is `C_ij + Σ_{k: b̂_k = 1} L_kij`.
/// The table is laid out `[i][k][j]` so one position's block stays in cache
/// while a batch of reports is scanned.
#[derive(Debug, Clone)]
pub struct GlrFusion {
    num_sensors: usize,
    num_positions: usize,
    num_thetas: usize,
    zero_index: usize,
    base: Vec<f64>,
    logit: Vec<f64>,
}

impl GlrFusion {
    pub fn new(scene: &Scene, grid: &GridSpec) -> Result<Self> {
        grid.check_against(scene)?;
        let k_n = scene.num_sensors();
        let n = grid.num_positions();
        let m = grid.num_thetas();
        let mut base = vec![0.0; n * m];
        let mut logit = vec![0.0; n * k_n * m];
        for (i, pos) in grid.positions().iter().enumerate() {
            for k in 0..k_n {
                let g = scene.gain(pos, k);
                let noise = &scene.noise()[k];
                let tau = scene.taus()[k];
                let pe = scene.pes()[k];
                for (j, &theta) in grid.thetas().iter().enumerate() {
                    let a = clamp_alpha(bsc(pe, noise.ccdf(tau - theta * g)));
                    let (l1, l0) = (a.ln(), (1.0 - a).ln());
                    base[i * m + j] += l0;
                    logit[(i * k_n + k) * m + j] = l1 - l0;
                }
            }
        }
        Ok(Self {
            num_sensors: k_n,
            num_positions: n,
            num_thetas: m,
            zero_index: grid.zero_index(),
            base,
            logit,
        })
    }

    pub fn evaluate(&self, report: &BitReport) -> Result<StatisticResult> {
        Ok(self.evaluate_batch(std::slice::from_ref(report))?.remove(0))
    }

    /// Evaluate many reports with one pass over the table.
    pub fn evaluate_batch(&self, reports: &[BitReport]) -> Result<Vec<StatisticResult>> {
        let (k_n, m) = (self.num_sensors, self.num_thetas);
        let ones: Vec<Vec<usize>> = reports
            .iter()
            .map(|r| {
                if r.len() != k_n {
                    Err(Error::LengthMismatch {
                        expected: k_n,
                        got: r.len(),
                    })
                } else {
                    Ok(r.ones().collect())
                }
            })
            .collect::<Result<_>>()?;
        // (best log-likelihood, i, j) per report; null value per report.
        let mut best = vec![(f64::NEG_INFINITY, 0usize, 0usize); reports.len()];
        let mut null = vec![0.0; reports.len()];
        let mut acc = vec![0.0; m];
        for i in 0..self.num_positions {
            let block = &self.logit[i * k_n * m..(i + 1) * k_n * m];
            let base = &self.base[i * m..(i + 1) * m];
            for (r, set) in ones.iter().enumerate() {
                acc.copy_from_slice(base);
                for &k in set {
                    for (a, l) in acc.iter_mut().zip(&block[k * m..(k + 1) * m]) {
                        *a += l;
                    }
                }
                if i == 0 {
                    // θ = 0 does not depend on position; every i yields the
                    // same bits here.
                    null[r] = acc[self.zero_index];
                }
                let b = &mut best[r];
                for (j, &v) in acc.iter().enumerate() {
                    if v > b.0 {
                        *b = (v, i, j);
                    }
                }
            }
        }
        Ok(best
            .into_iter()
            .zip(null)
            .map(|((ll, i, j), ll0)| StatisticResult {
                value: (2.0 * (ll - ll0)).max(0.0),
                argmax_position: i,
                argmax_theta: Some(j),
            })
            .collect())
    }
}
