//! Closed-form and empirical estimates of the expected critical coupling.
//!
//! Unless a function takes `sigma`, values are in units of the standard
//! uniform law on [0, 1], whose standard deviation is `√(1/12)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::mu;

const SIGMA_UNIT: f64 = 0.288_675_134_594_812_9; // √(1/12)

/// Empirical chain curve `0.252 √n − 0.168`.
pub fn chi(n: usize) -> f64 {
    0.252 * (n as f64).sqrt() - 0.168
}

/// [`chi`] rescaled to a frequency law with standard deviation `sigma`,
/// roughly `0.873 σ √n − 0.581 σ`.
pub fn chi_sigma(n: usize, sigma: f64) -> f64 {
    chi(n) * sigma / SIGMA_UNIT
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainBounds {
    /// Expected maximum displacement of an `n/2`-step walk, `σ√(πn/8)`.
    pub lower: f64,
    /// Expected maximum displacement of an `n`-step walk, `σ√(πn/4)`.
    pub upper: f64,
    /// Brownian-bridge asymptote `σ√(πn/2) ln 2`.
    pub kolmogorov: f64,
}

pub fn chain_bounds(n: usize) -> ChainBounds {
    chain_bounds_sigma(n, SIGMA_UNIT)
}

pub fn chain_bounds_sigma(n: usize, sigma: f64) -> ChainBounds {
    let n = n as f64;
    ChainBounds {
        lower: sigma * (PI * n / 8.0).sqrt(),
        upper: sigma * (PI * n / 4.0).sqrt(),
        kolmogorov: sigma * (PI * n / 2.0).sqrt() * std::f64::consts::LN_2,
    }
}

/// Star estimate `(n−2)/(2n) + √(1/(6nπ))`; needs `n >= 3`.
pub fn estimator_star(n: usize) -> f64 {
    estimator_star_sigma(n, SIGMA_UNIT)
}

/// `σ√3 (n−2)/n + σ√(2/(nπ))`.
pub fn estimator_star_sigma(n: usize, sigma: f64) -> f64 {
    let n = n as f64;
    sigma * 3f64.sqrt() * (n - 2.0) / n + sigma * (2.0 / (n * PI)).sqrt()
}

/// Star estimate for normal frequencies, `μ(n−2)/√12`.
pub fn estimator_star_normal(n: usize) -> f64 {
    estimator_star_normal_sigma(n, SIGMA_UNIT)
}

pub fn estimator_star_normal_sigma(n: usize, sigma: f64) -> f64 {
    sigma * mu(n.saturating_sub(2) as f64)
}

/// Half-split term alone, `√(n/(24π))`.
pub fn estimator_dumbbell_initial(n: usize) -> f64 {
    (n as f64 / (24.0 * PI)).sqrt()
}

/// Dumb-bell estimate with the leaf correction, `√(n/(24π)) + √(3/(2nπ))`.
pub fn estimator_dumbbell(n: usize) -> Result<f64> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadParameters(format!("dumbbell needs even n >= 4, got {n}")));
    }
    Ok(estimator_dumbbell_initial(n) + (3.0 / (2.0 * n as f64 * PI)).sqrt())
}

/// Empirical binary-tree curve `0.212 √n − 0.082`.
pub fn estimator_binary(n: usize) -> f64 {
    0.212 * (n as f64).sqrt() - 0.082
}
