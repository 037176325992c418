//! Sensor network geometry and the generative model for the received bits.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;

/// A point in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidScene(
                "region bounds must have equal, nonzero dimension".into(),
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h))
        {
            return Err(Error::InvalidScene(
                "region requires lo < hi in every coordinate".into(),
            ));
        }
        Ok(Self { lo, hi })
    }

    /// `[0, 1]^d`.
    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.0
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| *x >= *l && *x <= *h)
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point(
            self.lo
                .iter()
                .zip(&self.hi)
                .map(|(l, h)| l + (h - l) * rng.random::<f64>())
                .collect(),
        )
    }

    /// Regular lattice with `side` points per axis. With
    /// [`Placement::Boundary`] the outermost points sit on the faces of the
    /// box; with [`Placement::CellCentered`] they sit half a cell inside.
    pub fn lattice(&self, side: usize, placement: Placement) -> Vec<Point> {
        let axes: Vec<Vec<f64>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| axis_points(l, h, side, placement))
            .collect();
        let mut out = Vec::with_capacity(side.pow(self.dim() as u32));
        let mut idx = vec![0usize; self.dim()];
        loop {
            out.push(Point(idx.iter().enumerate().map(|(d, &i)| axes[d][i]).collect()));
            // Row-major with the last coordinate varying slowest.
            let mut d = 0;
            loop {
                if d == idx.len() {
                    return out;
                }
                idx[d] += 1;
                if idx[d] < side {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }
}

fn axis_points(lo: f64, hi: f64, side: usize, placement: Placement) -> Vec<f64> {
    match (placement, side) {
        (_, 0) => Vec::new(),
        (Placement::Boundary, 1) => vec![0.5 * (lo + hi)],
        (Placement::Boundary, n) => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        (Placement::CellCentered, n) => (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    #[default]
    Boundary,
    CellCentered,
}

/// Power-law amplitude attenuation `g = 1/√(1 + (d/η)^α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attenuation {
    pub eta: f64,
    pub alpha: f64,
}

impl Attenuation {
    pub fn new(eta: f64, alpha: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0 && alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidScene(format!(
                "attenuation requires eta > 0 and alpha > 0, got eta={eta}, alpha={alpha}"
            )));
        }
        Ok(Self { eta, alpha })
    }

    pub fn gain(&self, target: &Point, sensor: &Point) -> f64 {
        aaf(target, sensor, self.eta, self.alpha)
    }
}

pub fn aaf(target: &Point, sensor: &Point, eta: f64, alpha: f64) -> f64 {
    let r = target.distance(sensor) / eta;
    1.0 / (1.0 + r.powf(alpha)).sqrt()
}

/// `side²` sensors on a regular square grid over a 2-D region, boundary
/// included.
pub fn preset_grid_wsn(side: usize, region: &Region) -> Result<Vec<Point>> {
    preset_grid_wsn_with(side, region, Placement::Boundary)
}

pub fn preset_grid_wsn_with(side: usize, region: &Region, placement: Placement) -> Result<Vec<Point>> {
    if side < 2 {
        return Err(Error::InvalidScene(format!("grid side must be at least 2, got {side}")));
    }
    Ok(region.lattice(side, placement))
}

/// Signal amplitude θ and target position `x_T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub theta: f64,
    pub position: Point,
}

impl TargetState {
    pub fn new(theta: f64, position: Point) -> Self {
        Self { theta, position }
    }
}

/// Bits received at the fusion center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitReport {
    pub bits: Vec<bool>,
}

impl BitReport {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Report from the low `k` bits of `mask`, sensor 0 in bit 0.
    pub fn from_mask(mask: u64, k: usize) -> Self {
        Self {
            bits: (0..k).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn flipped(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| k)
    }
}

/// The sensor network and everything the fusion center knows about it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    sensors: Vec<Point>,
    noise: Vec<NoiseModel>,
    taus: Vec<f64>,
    pes: Vec<f64>,
    attenuation: Attenuation,
    region: Region,
}

impl Scene {
    pub fn new(
        sensors: Vec<Point>,
        noise: Vec<NoiseModel>,
        taus: Vec<f64>,
        pes: Vec<f64>,
        attenuation: Attenuation,
        region: Region,
    ) -> Result<Self> {
        let k = sensors.len();
        if k == 0 {
            return Err(Error::InvalidScene("at least one sensor is required".into()));
        }
        for len in [noise.len(), taus.len(), pes.len()] {
            if len != k {
                return Err(Error::LengthMismatch { expected: k, got: len });
            }
        }
        for s in &sensors {
            if !region.contains(s) {
                return Err(Error::InvalidScene(format!("sensor {:?} lies outside the region", s.0)));
            }
        }
        for &pe in &pes {
            check_pe(pe)?;
        }
        if let Some(t) = taus.iter().find(|t| t.is_nan()) {
            return Err(Error::InvalidScene(format!("threshold {t} is not a number")));
        }
        Ok(Self {
            sensors,
            noise,
            taus,
            pes,
            attenuation,
            region,
        })
    }

    /// Scene with shared noise, threshold and channel quality.
    pub fn homogeneous(
        sensors: Vec<Point>,
        noise: NoiseModel,
        tau: f64,
        pe: f64,
        attenuation: Attenuation,
        region: Region,
    ) -> Result<Self> {
        let k = sensors.len();
        Self::new(sensors, vec![noise; k], vec![tau; k], vec![pe; k], attenuation, region)
    }

    /// The 7×7 network on `[0, 1]²` with `η = 0.2`, `α = 4`.
    pub fn reference_network(noise: NoiseModel, tau: f64, pe: f64) -> Result<Self> {
        let region = Region::unit(2);
        let sensors = preset_grid_wsn(7, &region)?;
        Self::homogeneous(sensors, noise, tau, pe, Attenuation::new(0.2, 4.0)?, region)
    }

    pub fn num_sensors(&self) -> usize {
        self.sensors.len()
    }

    pub fn sensors(&self) -> &[Point] {
        &self.sensors
    }

    pub fn noise(&self) -> &[NoiseModel] {
        &self.noise
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn pes(&self) -> &[f64] {
        &self.pes
    }

    pub fn attenuation(&self) -> Attenuation {
        self.attenuation
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn gain(&self, target: &Point, k: usize) -> f64 {
        self.attenuation.gain(target, &self.sensors[k])
    }

    pub fn gains(&self, target: &Point) -> Vec<f64> {
        self.sensors.iter().map(|s| self.attenuation.gain(target, s)).collect()
    }

    /// Same network with every threshold set to `tau`.
    pub fn with_common_tau(&self, tau: f64) -> Self {
        Self {
            taus: vec![tau; self.num_sensors()],
            ..self.clone()
        }
    }

    pub fn with_common_pe(&self, pe: f64) -> Result<Self> {
        check_pe(pe)?;
        Ok(Self {
            pes: vec![pe; self.num_sensors()],
            ..self.clone()
        })
    }

    pub fn all_taus_zero(&self) -> bool {
        self.taus.iter().all(|&t| t == 0.0)
    }

    /// Sensor measurements `y_k`; pure noise when `target` is `None`.
    pub fn generate_measurements<R: Rng + ?Sized>(&self, target: Option<&TargetState>, rng: &mut R) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.num_sensors());
        self.generate_measurements_into(target, rng, &mut y);
        y
    }

    pub fn generate_measurements_into<R: Rng + ?Sized>(
        &self,
        target: Option<&TargetState>,
        rng: &mut R,
        out: &mut Vec<f64>,
    ) {
        out.clear();
        for (k, noise) in self.noise.iter().enumerate() {
            let signal = match target {
                Some(t) => t.theta * self.gain(&t.position, k),
                None => 0.0,
            };
            out.push(signal + noise.sample(rng));
        }
    }

    /// Full chain: measure, quantize against the scene thresholds, transmit.
    pub fn observe<R: Rng + ?Sized>(&self, target: Option<&TargetState>, rng: &mut R) -> BitReport {
        let y = self.generate_measurements(target, rng);
        let bits = quantize(&y, &self.taus).expect("lengths match by construction");
        bsc_transmit(&bits, &self.pes, rng)
    }
}

pub(crate) fn check_pe(pe: f64) -> Result<()> {
    if (0.0..0.5).contains(&pe) {
        Ok(())
    } else {
        Err(Error::InvalidPe(pe))
    }
}

/// One-bit quantization `b_k = u(y_k − τ_k)` with `u(0) = 1`.
pub fn quantize(y: &[f64], taus: &[f64]) -> Result<Vec<bool>> {
    if y.len() != taus.len() {
        return Err(Error::LengthMismatch {
            expected: taus.len(),
            got: y.len(),
        });
    }
    Ok(y.iter().zip(taus).map(|(y, t)| y >= t).collect())
}

/// Independent binary symmetric channels, one per sensor.
pub fn bsc_transmit<R: Rng + ?Sized>(bits: &[bool], pes: &[f64], rng: &mut R) -> BitReport {
    debug_assert_eq!(bits.len(), pes.len());
    let bits = bits
        .iter()
        .zip(pes)
        .map(|(&b, &pe)| {
            // Always consume one draw so streams stay aligned across P_e.
            let u: f64 = rng.random();
            if u < pe {
                !b
            } else {
                b
            }
        })
        .collect();
    BitReport { bits }
}
