//! Zero-mean, unimodal, symmetric sensing noise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{erfc, gamma_q, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    Gaussian,
    Laplace,
    /// Generalized Gaussian `∝ exp(−(|x|/s)^ε)`.
    #[serde(rename = "gengauss")]
    GeneralizedGaussian,
    Cauchy,
}

impl NoiseFamily {
    pub fn key(self) -> &'static str {
        match self {
            NoiseFamily::Gaussian => "gaussian",
            NoiseFamily::Laplace => "laplace",
            NoiseFamily::GeneralizedGaussian => "gengauss",
            NoiseFamily::Cauchy => "cauchy",
        }
    }
}

impl fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(NoiseFamily::Gaussian),
            "laplace" => Ok(NoiseFamily::Laplace),
            "gengauss" => Ok(NoiseFamily::GeneralizedGaussian),
            "cauchy" => Ok(NoiseFamily::Cauchy),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A noise density with its scale parameter.
///
/// `scale` is σ for Gaussian, β for Laplace, `s` for the generalized
/// Gaussian and the half-width γ for Cauchy. `shape` is the generalized
/// Gaussian exponent ε and is ignored by the other families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    family: NoiseFamily,
    scale: f64,
    shape: f64,
}

impl NoiseModel {
    pub fn new(family: NoiseFamily, scale: f64, shape: Option<f64>) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidNoise(format!("scale must be positive, got {scale}")));
        }
        let shape = match family {
            NoiseFamily::GeneralizedGaussian => {
                let e = shape.ok_or_else(|| Error::InvalidNoise("generalized Gaussian requires a shape".into()))?;
                // ε = 0 is degenerate (no normalizable density).
                if !(e > 0.0 && e <= 2.0) {
                    return Err(Error::InvalidNoise(format!(
                        "generalized Gaussian shape must lie in (0, 2], got {e}"
                    )));
                }
                e
            }
            _ => 2.0,
        };
        Ok(Self { family, scale, shape })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(NoiseFamily::Gaussian, sigma, None)
    }

    pub fn laplace(beta: f64) -> Result<Self> {
        Self::new(NoiseFamily::Laplace, beta, None)
    }

    pub fn cauchy(gamma: f64) -> Result<Self> {
        Self::new(NoiseFamily::Cauchy, gamma, None)
    }

    pub fn generalized_gaussian(scale: f64, shape: f64) -> Result<Self> {
        Self::new(NoiseFamily::GeneralizedGaussian, scale, Some(shape))
    }

    /// Model of the given family with `E{w²} = 1`.
    pub fn unit_variance(family: NoiseFamily, shape: Option<f64>) -> Result<Self> {
        let scale = match family {
            NoiseFamily::Gaussian => 1.0,
            NoiseFamily::Laplace => std::f64::consts::FRAC_1_SQRT_2,
            NoiseFamily::GeneralizedGaussian => {
                let e = shape.ok_or_else(|| Error::InvalidNoise("generalized Gaussian requires a shape".into()))?;
                if !(e > 0.0 && e <= 2.0) {
                    return Err(Error::InvalidNoise(format!(
                        "generalized Gaussian shape must lie in (0, 2], got {e}"
                    )));
                }
                (ln_gamma(1.0 / e) - ln_gamma(3.0 / e)).exp().sqrt()
            }
            NoiseFamily::Cauchy => return Err(Error::NoFiniteVariance),
        };
        Self::new(family, scale, shape)
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shape(&self) -> Option<f64> {
        match self.family {
            NoiseFamily::GeneralizedGaussian => Some(self.shape),
            _ => None,
        }
    }

    /// `E{w²}`, `None` for Cauchy.
    pub fn variance(&self) -> Option<f64> {
        let s = self.scale;
        match self.family {
            NoiseFamily::Gaussian => Some(s * s),
            NoiseFamily::Laplace => Some(2.0 * s * s),
            NoiseFamily::GeneralizedGaussian => {
                let e = self.shape;
                Some(s * s * (ln_gamma(3.0 / e) - ln_gamma(1.0 / e)).exp())
            }
            NoiseFamily::Cauchy => None,
        }
    }

    /// Reference power for SNR definitions: the variance, or `scale²` when the
    /// variance is infinite.
    pub fn power(&self) -> f64 {
        self.variance().unwrap_or(self.scale * self.scale)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.scale;
        let z = x.abs() / s;
        match self.family {
            NoiseFamily::Gaussian => (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt()),
            NoiseFamily::Laplace => (-z).exp() / (2.0 * s),
            NoiseFamily::GeneralizedGaussian => {
                let e = self.shape;
                let log_norm = e.ln() - (2.0 * s).ln() - ln_gamma(1.0 / e);
                (log_norm - z.powf(e)).exp()
            }
            NoiseFamily::Cauchy => 1.0 / (PI * s * (1.0 + z * z)),
        }
    }

    /// Complementary CDF `Pr{w > x}`.
    pub fn ccdf(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.5;
        }
        let upper = self.upper_tail(x.abs());
        if x > 0.0 {
            upper
        } else {
            1.0 - upper
        }
    }

    // Pr{w > t} for t > 0.
    fn upper_tail(&self, t: f64) -> f64 {
        let z = t / self.scale;
        match self.family {
            NoiseFamily::Gaussian => 0.5 * erfc(z * std::f64::consts::FRAC_1_SQRT_2),
            NoiseFamily::Laplace => 0.5 * (-z).exp(),
            NoiseFamily::GeneralizedGaussian => {
                let e = self.shape;
                0.5 * gamma_q(1.0 / e, z.powf(e))
            }
            // atan(1/z)/π avoids cancellation in 1/2 − atan(z)/π.
            NoiseFamily::Cauchy => (1.0 / z).atan() / PI,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let s = self.scale;
        match self.family {
            NoiseFamily::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                s * z
            }
            NoiseFamily::Laplace => {
                // Inverse CDF on u ∈ (−1/2, 1/2).
                let u: f64 = rng.random::<f64>() - 0.5;
                let mag = -(1.0 - 2.0 * u.abs()).ln();
                s * mag.copysign(u)
            }
            NoiseFamily::GeneralizedGaussian => {
                let e = self.shape;
                let g = Gamma::new(1.0 / e, 1.0).expect("shape validated at construction");
                let mag = s * g.sample(rng).powf(1.0 / e);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            NoiseFamily::Cauchy => {
                let u: f64 = rng.random();
                s * (PI * (u - 0.5)).tan()
            }
        }
    }
}
