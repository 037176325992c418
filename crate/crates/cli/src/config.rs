//! Experiment configuration: a TOML file with one table per module, plus
//! `section.key=value` overrides from the command line.

use std::path::{Path, PathBuf};

use rao_fusion::fusion::default_grids;
use rao_fusion::montecarlo::{noise_power, SweepBudget};
use rao_fusion::scene::{preset_grid_wsn_with, Attenuation, Placement, Point, Region};
use rao_fusion::{GridSpec, NoiseFamily, NoiseModel, Rule, Scene, TargetDraw};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A scalar broadcast to every sensor, or one value per sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerSensor {
    Scalar(f64),
    List(Vec<f64>),
}

impl PerSensor {
    fn expand(&self, k: usize, what: &str) -> Result<Vec<f64>, CliError> {
        match self {
            PerSensor::Scalar(v) => Ok(vec![*v; k]),
            PerSensor::List(v) if v.len() == k => Ok(v.clone()),
            PerSensor::List(v) => Err(CliError::validation(format!(
                "scene.{what} lists {} values for {k} sensors",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    Grid,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SceneConfig {
    pub layout: Layout,
    /// Sensors per axis for `layout = "grid"`.
    pub side: usize,
    pub placement: Placement,
    /// Coordinates for `layout = "explicit"`.
    pub sensors: Vec<Vec<f64>>,
    pub region_lo: Vec<f64>,
    pub region_hi: Vec<f64>,
    pub noise: NoiseFamily,
    /// Omitted: unit variance (required for Cauchy).
    pub noise_scale: Option<PerSensor>,
    /// Generalized Gaussian exponent.
    pub noise_shape: Option<f64>,
    pub taus: PerSensor,
    pub pes: PerSensor,
    pub eta: f64,
    pub alpha: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            layout: Layout::Grid,
            side: 7,
            placement: Placement::Boundary,
            sensors: Vec::new(),
            region_lo: vec![0.0, 0.0],
            region_hi: vec![1.0, 1.0],
            noise: NoiseFamily::Gaussian,
            noise_scale: None,
            noise_shape: None,
            taus: PerSensor::Scalar(0.0),
            pes: PerSensor::Scalar(0.0),
            eta: 0.2,
            alpha: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Search positions per axis.
    pub nc: usize,
    pub snr_db_min: f64,
    pub snr_db_max: f64,
    pub snr_db_step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nc: 50,
            snr_db_min: -10.0,
            snr_db_max: 20.0,
            snr_db_step: 1.0,
        }
    }
}

/// `"uniform"` or a fixed position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Keyword(String),
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonteCarloConfig {
    pub trials_h0: usize,
    pub trials_h1: usize,
    /// GLR budgets; fall back to the shared ones when omitted.
    pub glr_trials_h0: Option<usize>,
    pub glr_trials_h1: Option<usize>,
    pub master_seed: u64,
    pub pf: Vec<f64>,
    pub rules: Vec<Rule>,
    pub target: TargetSpec,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            trials_h0: 50_000,
            trials_h1: 20_000,
            glr_trials_h0: None,
            glr_trials_h1: Some(5_000),
            master_seed: 1,
            pf: vec![0.05, 0.01],
            rules: vec![Rule::GRao, Rule::Glr],
            target: TargetSpec::Keyword("uniform".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_step: f64,
    /// SNR values of the threshold sweep.
    pub tau_snr_db: Vec<f64>,
    pub polarities: Vec<i8>,
    pub snr_db_min: f64,
    pub snr_db_max: f64,
    pub snr_db_step: f64,
    /// Bit-error probabilities of the SNR sweep.
    pub pes: Vec<f64>,
    pub polarity: i8,
    pub heatmap_side: usize,
    pub heatmap_placement: Placement,
    pub heatmap_snr_db: f64,
    pub roc_snr_db: f64,
    pub roc_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            tau_min: -2.0,
            tau_max: 2.0,
            tau_step: 0.25,
            tau_snr_db: vec![0.0, 10.0],
            polarities: vec![1, -1],
            snr_db_min: -10.0,
            snr_db_max: 20.0,
            snr_db_step: 2.0,
            pes: vec![0.0, 0.1],
            polarity: 1,
            heatmap_side: 10,
            heatmap_placement: Placement::CellCentered,
            heatmap_snr_db: 5.0,
            roc_snr_db: 0.0,
            roc_points: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("results"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub scene: SceneConfig,
    pub grid: GridConfig,
    pub montecarlo: MonteCarloConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

/// Parse `section.key=value`, reading the value as TOML and falling back to
/// a bare string.
fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::parse(format!("override `{assignment}` is not of the form section.key=value")))?;
    let path = path.trim();
    let (section, key) = path
        .split_once('.')
        .ok_or_else(|| CliError::parse(format!("override key `{path}` must be section.key")))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()));
    let entry = table
        .entry(section.to_owned())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(key.to_owned(), value);
            Ok(())
        }
        _ => Err(CliError::parse(format!("`{section}` is not a section"))),
    }
}

impl ExperimentConfig {
    /// Read an optional config file and apply overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::parse(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| CliError::parse(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> Result<(), CliError> {
        let mc = &self.montecarlo;
        if mc.trials_h0 == 0 || mc.trials_h1 == 0 || mc.glr_trials_h0 == Some(0) || mc.glr_trials_h1 == Some(0) {
            return Err(CliError::validation("trial counts must be positive"));
        }
        if mc.pf.is_empty() || mc.pf.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(CliError::validation("montecarlo.pf must list probabilities in (0, 1)"));
        }
        if mc.rules.is_empty() {
            return Err(CliError::validation("montecarlo.rules must not be empty"));
        }
        if self.grid.nc == 0 {
            return Err(CliError::validation("grid.nc must be at least 1"));
        }
        let sw = &self.sweep;
        if sw.polarities.iter().chain([&sw.polarity]).any(|p| *p != 1 && *p != -1) {
            return Err(CliError::validation("polarities must be 1 or -1"));
        }
        if sw.heatmap_side == 0 || sw.roc_points == 0 {
            return Err(CliError::validation(
                "sweep.heatmap_side and sweep.roc_points must be positive",
            ));
        }
        inclusive_range(
            self.grid.snr_db_min,
            self.grid.snr_db_max,
            self.grid.snr_db_step,
            "grid.snr_db",
        )?;
        inclusive_range(sw.tau_min, sw.tau_max, sw.tau_step, "sweep.tau")?;
        inclusive_range(sw.snr_db_min, sw.snr_db_max, sw.snr_db_step, "sweep.snr_db")?;
        self.target_draw()?;
        Ok(())
    }

    pub fn region(&self) -> Result<Region, CliError> {
        Ok(Region::new(self.scene.region_lo.clone(), self.scene.region_hi.clone())?)
    }

    pub fn build_scene(&self) -> Result<Scene, CliError> {
        let sc = &self.scene;
        let region = self.region()?;
        let sensors: Vec<Point> = match sc.layout {
            Layout::Grid => preset_grid_wsn_with(sc.side, &region, sc.placement)?,
            Layout::Explicit => {
                if sc.sensors.is_empty() {
                    return Err(CliError::validation(
                        "scene.layout = \"explicit\" requires scene.sensors",
                    ));
                }
                sc.sensors.iter().cloned().map(Point::new).collect()
            }
        };
        let k = sensors.len();
        let noise: Vec<NoiseModel> = match &sc.noise_scale {
            None => vec![NoiseModel::unit_variance(sc.noise, sc.noise_shape)?; k],
            Some(s) => s
                .expand(k, "noise_scale")?
                .into_iter()
                .map(|scale| NoiseModel::new(sc.noise, scale, sc.noise_shape))
                .collect::<rao_fusion::Result<_>>()?,
        };
        Ok(Scene::new(
            sensors,
            noise,
            sc.taus.expand(k, "taus")?,
            sc.pes.expand(k, "pes")?,
            Attenuation::new(sc.eta, sc.alpha)?,
            region,
        )?)
    }

    /// Search grid; amplitudes follow the mean noise power of `scene`.
    pub fn build_grid(&self, scene: &Scene) -> Result<GridSpec, CliError> {
        let g = &self.grid;
        let snr = inclusive_range(g.snr_db_min, g.snr_db_max, g.snr_db_step, "grid.snr_db")?;
        Ok(default_grids(scene.region(), g.nc, &snr, noise_power(scene))?)
    }

    pub fn target_draw(&self) -> Result<TargetDraw, CliError> {
        match &self.montecarlo.target {
            TargetSpec::Keyword(k) if k == "uniform" => Ok(TargetDraw::Uniform),
            TargetSpec::Keyword(k) => Err(CliError::validation(format!(
                "montecarlo.target must be \"uniform\" or a coordinate list, got `{k}`"
            ))),
            TargetSpec::Fixed(c) => Ok(TargetDraw::Fixed(Point::new(c.clone()))),
        }
    }

    pub fn budget(&self) -> SweepBudget {
        let mc = &self.montecarlo;
        SweepBudget {
            trials_h0: mc.trials_h0,
            trials_h1: mc.trials_h1,
            glr_trials_h0: mc.glr_trials_h0,
            glr_trials_h1: mc.glr_trials_h1,
            master_seed: mc.master_seed,
        }
    }

    pub fn tau_values(&self) -> Result<Vec<f64>, CliError> {
        let s = &self.sweep;
        inclusive_range(s.tau_min, s.tau_max, s.tau_step, "sweep.tau")
    }

    pub fn snr_values(&self) -> Result<Vec<f64>, CliError> {
        let s = &self.sweep;
        inclusive_range(s.snr_db_min, s.snr_db_max, s.snr_db_step, "sweep.snr_db")
    }
}

/// `min, min + step, …` up to `max` inclusive. Values within 1e-9 steps of
/// zero snap to exactly zero so a symmetric range always contains 0.
pub fn inclusive_range(min: f64, max: f64, step: f64, what: &str) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
        return Err(CliError::validation(format!(
            "{what}: need finite min <= max and step > 0, got {min}..{max} step {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| {
            let v = min + step * i as f64;
            if v.abs() < 1e-9 * step {
                0.0
            } else {
                v
            }
        })
        .collect())
}
