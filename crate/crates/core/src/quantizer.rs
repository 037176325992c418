//! Per-sensor quantizer threshold design.
//!
//! The clairvoyant non-centrality decouples over sensors, so each threshold
//! maximizes its own objective
//!
//! ```text
//! ψ_0(τ) = p(τ)² / (Δ + F(τ)(1 − F(τ))),   Δ = P_e(1 − P_e)/(1 − 2P_e)²
//! ```
//!
//! independently of the target position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::scene::check_pe;

/// Uniform probe points used before golden-section refinement.
pub const SCAN_POINTS: usize = 10_000;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdDesign {
    pub tau_star: f64,
    pub objective_at_star: f64,
    pub search_interval: (f64, f64),
    pub tolerance: f64,
}

/// Channel penalty `Δ`.
pub fn delta(pe: f64) -> Result<f64> {
    check_pe(pe)?;
    Ok(pe * (1.0 - pe) / (1.0 - 2.0 * pe).powi(2))
}

/// Threshold objective `ψ_0(τ)`.
pub fn psi0(tau: f64, noise: &NoiseModel, pe: f64) -> Result<f64> {
    let d = delta(pe)?;
    Ok(psi0_with_delta(tau, noise, d))
}

fn psi0_with_delta(tau: f64, noise: &NoiseModel, delta: f64) -> f64 {
    let p = noise.pdf(tau);
    let f = noise.ccdf(tau);
    let var = delta + f * (1.0 - f);
    if var <= 0.0 {
        0.0
    } else {
        p * p / var
    }
}

/// Default search interval `[−5s, 5s]`, `s` the noise scale.
pub fn default_interval(noise: &NoiseModel) -> (f64, f64) {
    (-5.0 * noise.scale(), 5.0 * noise.scale())
}

/// Global maximizer of `ψ_0` on `interval`: a uniform scan of
/// [`SCAN_POINTS`] points, then golden-section refinement inside the
/// bracket around the best probe.
pub fn optimize_threshold(noise: &NoiseModel, pe: f64, interval: (f64, f64), tol: f64) -> Result<ThresholdDesign> {
    let d = delta(pe)?;
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo <= 0.0 && hi >= 0.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "interval [{lo}, {hi}] must be finite and contain 0"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f = |t: f64| psi0_with_delta(t, noise, d);

    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let probe = |i: usize| if i == SCAN_POINTS - 1 { hi } else { lo + step * i as f64 };
    let (best_i, _) =
        (0..SCAN_POINTS).map(|i| (i, f(probe(i)))).fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let mut a = probe(best_i.saturating_sub(1));
    let mut b = probe((best_i + 1).min(SCAN_POINTS - 1));

    let mut c = b - INV_PHI * (b - a);
    let mut e = a + INV_PHI * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    while b - a > tol {
        if fc >= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + INV_PHI * (b - a);
            fe = f(e);
        }
    }
    // Keep the best of the refined midpoint and the probe itself; on a flat
    // top golden section cannot resolve below rounding.
    let mid = 0.5 * (a + b);
    let candidates = [mid, probe(best_i)];
    let (tau_star, objective_at_star) = candidates.iter().map(|&t| (t, f(t))).fold(
        (mid, f64::NEG_INFINITY),
        |acc, (t, v)| if v > acc.1 { (t, v) } else { acc },
    );
    Ok(ThresholdDesign {
        tau_star,
        objective_at_star,
        search_interval: interval,
        tolerance: tol,
    })
}

/// `(τ, ψ_0(τ))` on `points` uniformly spaced thresholds.
pub fn objective_curve(noise: &NoiseModel, pe: f64, interval: (f64, f64), points: usize) -> Result<Vec<(f64, f64)>> {
    let d = delta(pe)?;
    let (lo, hi) = interval;
    let n = points.max(2);
    Ok((0..n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            (t, psi0_with_delta(t, noise, d))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseFamily;
    use std::f64::consts::PI;

    #[test]
    fn delta_examples() {
        assert_eq!(delta(0.0).unwrap(), 0.0);
        assert!((delta(0.1).unwrap() - 0.140_625).abs() < 1e-15);
        assert!(delta(0.2).unwrap() > delta(0.1).unwrap());
        assert!(delta(0.5).is_err());
        assert!(delta(0.7).is_err());
    }

    #[test]
    fn psi0_examples() {
        let g = NoiseModel::gaussian(1.0).unwrap();
        assert!((psi0(0.0, &g, 0.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        let l = NoiseModel::unit_variance(NoiseFamily::Laplace, None).unwrap();
        assert!((psi0(0.0, &l, 0.0).unwrap() - 2.0).abs() < 1e-14);
        for &t in &[0.3, 1.1, 2.7] {
            assert!((psi0(t, &g, 0.1).unwrap() - psi0(-t, &g, 0.1).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn optimum_is_zero_for_common_families() {
        let models = [
            NoiseModel::gaussian(1.0).unwrap(),
            NoiseModel::unit_variance(NoiseFamily::Laplace, None).unwrap(),
            NoiseModel::cauchy(1.0).unwrap(),
        ];
        for m in models {
            for pe in [0.0, 0.1] {
                let d = optimize_threshold(&m, pe, (-5.0, 5.0), 1e-8).unwrap();
                assert!(d.tau_star.abs() < 1e-6, "{m:?} pe={pe} tau*={}", d.tau_star);
            }
        }
    }

    #[test]
    fn optimum_dominates_probes() {
        let m = NoiseModel::generalized_gaussian(1.0, 1.3).unwrap();
        let d = optimize_threshold(&m, 0.05, (-4.0, 4.0), 1e-8).unwrap();
        for (_, v) in objective_curve(&m, 0.05, (-4.0, 4.0), SCAN_POINTS).unwrap() {
            assert!(d.objective_at_star >= v - 1e-8);
        }
        assert!(d.tau_star >= -4.0 && d.tau_star <= 4.0);
    }

    #[test]
    fn rejects_bad_interval() {
        let m = NoiseModel::gaussian(1.0).unwrap();
        assert!(optimize_threshold(&m, 0.0, (0.5, 2.0), 1e-8).is_err());
        assert!(optimize_threshold(&m, 0.0, (-1.0, 1.0), 0.0).is_err());
    }
}
