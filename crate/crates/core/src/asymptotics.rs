//! Asymptotic performance of the position-clairvoyant Rao and GLR tests.
//!
//! Under a weak signal the clairvoyant statistic is `χ²₁` under the null and
//! `χ'²₁(λ_Q)` under the alternative, with `λ_Q = θ₁² I(0, x_T)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::fisher_information;
use crate::scene::{Point, Scene};
use crate::special::{gamma_p, gamma_q, ln_gamma};

/// Poisson tail mass at which the non-central series is truncated.
pub const SERIES_TAIL: f64 = 1e-14;
const QUANTILE_UPPER: f64 = 1e3;
const QUANTILE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub lambda: f64,
    pub pf: f64,
    pub pd_predicted: f64,
}

impl AsymptoticPrediction {
    pub fn new(lambda: f64, pf: f64) -> Result<Self> {
        Ok(Self {
            lambda,
            pf,
            pd_predicted: clairvoyant_pd(pf, lambda)?,
        })
    }
}

/// `λ_Q(x_T) = θ₁² Σ_k ψ_k0 g_k²`.
pub fn noncentrality(theta1: f64, x_t: &Point, scene: &Scene) -> f64 {
    theta1 * theta1 * fisher_information(0.0, x_t, scene)
}

/// `λ_Q*(x_T) = 4θ₁² Σ_k (1−2P_e,k)² p_k(0)² g_k²`; requires all `τ_k = 0`.
pub fn noncentrality_optimized(theta1: f64, x_t: &Point, scene: &Scene) -> Result<f64> {
    if !scene.all_taus_zero() {
        return Err(Error::NonZeroThreshold);
    }
    let sum: f64 = (0..scene.num_sensors())
        .map(|k| {
            let c = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(0.0) * scene.gain(x_t, k);
            c * c
        })
        .sum();
    Ok(4.0 * theta1 * theta1 * sum)
}

fn check_dof(dof: u32) -> Result<()> {
    if dof == 0 {
        return Err(Error::Domain("degrees of freedom must be at least 1".into()));
    }
    Ok(())
}

pub fn chi2_cdf(x: f64, dof: u32) -> Result<f64> {
    check_dof(dof)?;
    if x.is_nan() {
        return Err(Error::Domain("chi2_cdf of NaN".into()));
    }
    Ok(if x <= 0.0 {
        0.0
    } else {
        gamma_p(0.5 * dof as f64, 0.5 * x)
    })
}

pub fn chi2_ccdf(x: f64, dof: u32) -> Result<f64> {
    check_dof(dof)?;
    if x.is_nan() {
        return Err(Error::Domain("chi2_ccdf of NaN".into()));
    }
    Ok(if x <= 0.0 {
        1.0
    } else {
        gamma_q(0.5 * dof as f64, 0.5 * x)
    })
}

/// Inverse CDF by bisection on `[0, 1000]`.
pub fn chi2_quantile(p: f64, dof: u32) -> Result<f64> {
    check_dof(dof)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")));
    }
    let (mut lo, mut hi) = (0.0_f64, QUANTILE_UPPER);
    if chi2_cdf(hi, dof)? < p {
        return Err(Error::Domain(format!("quantile {p} exceeds the bisection bracket")));
    }
    // Bisect on whichever tail is smaller so p near 1 keeps its precision.
    let upper = p > 0.5;
    while hi - lo > QUANTILE_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let below = if upper {
            chi2_ccdf(mid, dof)? > 1.0 - p
        } else {
            chi2_cdf(mid, dof)? < p
        };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `Pr{χ'²_dof(λ) > x}` as a Poisson mixture of central tails,
/// `Σ_j e^{−λ/2}(λ/2)^j/j! · Q_{dof+2j}(x)`, truncated once the remaining
/// Poisson mass is below [`SERIES_TAIL`].
pub fn noncentral_chi2_ccdf(x: f64, dof: u32, lambda: f64) -> Result<f64> {
    noncentral_chi2_ccdf_terms(x, dof, lambda).map(|(v, _)| v)
}

/// Same as [`noncentral_chi2_ccdf`], also returning the number of series
/// terms used.
pub fn noncentral_chi2_ccdf_terms(x: f64, dof: u32, lambda: f64) -> Result<(f64, usize)> {
    check_dof(dof)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "non-centrality must be finite and ≥ 0, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return Ok((chi2_ccdf(x, dof)?, 1));
    }
    if x <= 0.0 {
        return Ok((1.0, 0));
    }
    let half = 0.5 * lambda;
    let ln_half = half.ln();
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut j = 0usize;
    loop {
        let w = (-half + j as f64 * ln_half - ln_gamma(j as f64 + 1.0)).exp();
        mass += w;
        sum += w * gamma_q(0.5 * dof as f64 + j as f64, 0.5 * x);
        j += 1;
        // The tail bound needs j past the Poisson mode.
        if j as f64 > half && 1.0 - mass < SERIES_TAIL {
            break;
        }
        if j > 100_000 {
            break;
        }
    }
    Ok((sum.clamp(0.0, 1.0), j))
}

/// Detection probability of the clairvoyant test at level `pf`:
/// `Pr{χ'²₁(λ) > χ²₁^{-1}(1 − pf)}`.
pub fn clairvoyant_pd(pf: f64, lambda: f64) -> Result<f64> {
    if !(pf > 0.0 && pf < 1.0) {
        return Err(Error::Domain(format!("pf must lie in (0, 1), got {pf}")));
    }
    let gamma = chi2_quantile(1.0 - pf, 1)?;
    noncentral_chi2_ccdf(gamma, 1, lambda)
}
