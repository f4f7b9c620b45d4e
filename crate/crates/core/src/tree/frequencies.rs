use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_distr::Normal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Sampling law for natural frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FrequencyDistribution {
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
}

impl FrequencyDistribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let d = FrequencyDistribution::Uniform { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        let d = FrequencyDistribution::Normal { mean, sd };
        d.validate()?;
        Ok(d)
    }

    /// Uniform on [0, 1]: mean 1/2, variance 1/12.
    pub fn standard_uniform() -> Self {
        FrequencyDistribution::Uniform { lo: 0.0, hi: 1.0 }
    }

    /// Normal law with the mean and variance of [`standard_uniform`](Self::standard_uniform).
    pub fn matched_normal() -> Self {
        FrequencyDistribution::Normal {
            mean: 0.5,
            sd: (1.0f64 / 12.0).sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                    return Err(Error::BadParameters(format!("uniform needs finite lo < hi, got [{lo}, {hi}]")));
                }
            }
            FrequencyDistribution::Normal { mean, sd } => {
                if !(mean.is_finite() && sd.is_finite() && sd > 0.0) {
                    return Err(Error::BadParameters(format!("normal needs finite mean and sd > 0, got ({mean}, {sd})")));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
            FrequencyDistribution::Normal { mean, .. } => mean,
        }
    }

    /// Standard deviation of a single draw.
    pub fn sigma(&self) -> f64 {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => (hi - lo) / 12f64.sqrt(),
            FrequencyDistribution::Normal { sd, .. } => sd,
        }
    }

    /// Same family with every draw multiplied by `a` about zero.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => Self::uniform(a * lo, a * hi),
            FrequencyDistribution::Normal { mean, sd } => Self::normal(a * mean, a * sd),
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, FrequencyDistribution::Normal { .. })
    }

    pub(crate) fn sampler(&self) -> Sampler {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => {
                Sampler::Uniform(Uniform::new(lo, hi).expect("validated uniform bounds"))
            }
            FrequencyDistribution::Normal { mean, sd } => {
                Sampler::Normal(Normal::new(mean, sd).expect("validated normal parameters"))
            }
        }
    }
}

impl fmt::Display for FrequencyDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FrequencyDistribution::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            FrequencyDistribution::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
        }
    }
}

/// Parses `uniform`, `normal`, `uniform:LO:HI` or `normal:MEAN:SD`. The bare
/// names give [`standard_uniform`](FrequencyDistribution::standard_uniform)
/// and [`matched_normal`](FrequencyDistribution::matched_normal).
impl FromStr for FrequencyDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::BadParameters(format!("bad number {x:?} in distribution {s:?}")))
        };
        match parts.as_slice() {
            ["uniform"] => Ok(Self::standard_uniform()),
            ["normal"] => Ok(Self::matched_normal()),
            ["uniform", lo, hi] => Self::uniform(num(lo)?, num(hi)?),
            ["normal", mean, sd] => Self::normal(num(mean)?, num(sd)?),
            _ => Err(Error::BadParameters(format!("unknown distribution {s:?}"))),
        }
    }
}

pub(crate) enum Sampler {
    Uniform(Uniform<f64>),
    Normal(Normal<f64>),
}

impl Sampler {
    #[inline]
    pub(crate) fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            Sampler::Uniform(d) => out.iter_mut().for_each(|w| *w = d.sample(rng)),
            Sampler::Normal(d) => out.iter_mut().for_each(|w| *w = d.sample(rng)),
        }
    }
}

/// `n` independent draws from `dist`, determined by `(dist, n, seed)`.
pub fn sample_frequencies(dist: &FrequencyDistribution, n: usize, seed: u64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    sample_frequencies_into(dist, &mut stream_rng(seed, 0), &mut out);
    out
}

/// Fills `out` with independent draws from `dist` using `rng`.
pub fn sample_frequencies_into<R: Rng + ?Sized>(dist: &FrequencyDistribution, rng: &mut R, out: &mut [f64]) {
    dist.sampler().fill(rng, out);
}
