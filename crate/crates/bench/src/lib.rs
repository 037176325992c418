//! Shared fixtures for the benchmarks.

use rao_fusion::fusion::{default_grids, default_snr_range};
use rao_fusion::montecarlo::Experiment;
use rao_fusion::rng::{Purpose, TrialStreams};
use rao_fusion::{BitReport, GridSpec, NoiseModel, Point, Region, Rule, Scene, TargetDraw};

/// Reference 7×7 Gaussian network and an `nc × nc` search grid.
pub fn reference_setup(nc: usize) -> (Scene, GridSpec) {
    let scene = Scene::reference_network(NoiseModel::gaussian(1.0).unwrap(), 0.0, 0.0).unwrap();
    let grid = default_grids(&Region::unit(2), nc, &default_snr_range(), 1.0).unwrap();
    (scene, grid)
}

/// `n` reports with a uniformly placed target of amplitude `theta`.
pub fn simulated_reports(scene: &Scene, theta: f64, n: usize, seed: u64) -> Vec<BitReport> {
    let grid = GridSpec::single_position(Point::xy(0.5, 0.5));
    let exp = Experiment::new(Rule::ClairvoyantRao, scene, &grid, TargetDraw::Uniform).unwrap();
    let streams = TrialStreams::new(seed, Purpose::Other(1));
    (0..n as u64)
        .map(|t| exp.simulate_report(theta, &streams, t).0)
        .collect()
}
