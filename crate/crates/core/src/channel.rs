//! Rician envelope statistics and Clarke-model CSI aging.
//!
//! Channels have unit power, `E|h|² = 1`. The mean envelope is
//! `Ω = √(π/(4(1+K)))·L_{1/2}(−K)`. The Laguerre function is evaluated with
//! exponentially scaled Bessel functions, so it is finite for every K.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{bessel_i0e, bessel_i1e, bessel_j0};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicianParams {
    pub k: f64,
}

impl RicianParams {
    pub fn new(k: f64) -> Result<Self> {
        if !(k >= 0.0) || k.is_nan() {
            return Err(Error::param("k", format!("Rician factor must be >= 0, got {k}")));
        }
        Ok(Self { k })
    }

    pub fn from_db(k_db: f64) -> Result<Self> {
        Self::new(10f64.powf(k_db / 10.0))
    }

    pub fn rayleigh() -> Self {
        Self { k: 0.0 }
    }

    pub fn mean_envelope(&self) -> f64 {
        rician_mean_envelope(self)
    }
}

/// Correlation between the outdated estimate and the actual channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsiAging {
    pub rho: f64,
}

impl CsiAging {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::param("rho", format!("correlation must lie in [0, 1], got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn perfect() -> Self {
        Self { rho: 1.0 }
    }

    /// `ρ = J0(2π·fc·v/c·ts)`. With `clamp_negative` a negative J0 gives `ρ = 0`.
    pub fn from_doppler(fc: f64, v: f64, ts: f64, clamp_negative: bool) -> Result<Self> {
        match outdated_correlation(fc, v, ts) {
            Ok(rho) => Ok(Self { rho }),
            Err(Error::NegativeCorrelation { .. }) if clamp_negative => Ok(Self { rho: 0.0 }),
            Err(e) => Err(e),
        }
    }

    /// `ρ̄ = √(1 − ρ²)`.
    pub fn rho_bar(&self) -> f64 {
        (1.0 - self.rho * self.rho).max(0.0).sqrt()
    }
}

/// `L_{1/2}(x)` for `x ≤ 0`.
pub fn laguerre_half(x: f64) -> f64 {
    // e^{x/2}·I_ν(−x/2) = I_ν e(−x/2) for x ≤ 0.
    let k = -x;
    let h = k / 2.0;
    (1.0 + k) * bessel_i0e(h) + k * bessel_i1e(h)
}

pub fn rician_mean_envelope(params: &RicianParams) -> f64 {
    let k = params.k;
    (PI / (4.0 * (1.0 + k))).sqrt() * laguerre_half(-k)
}

/// `J0(2π·fc·v/c·ts)`; a negative value is an error.
pub fn outdated_correlation(fc: f64, v: f64, ts: f64) -> Result<f64> {
    for (name, value) in [("fc", fc), ("velocity", v), ("delay", ts)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::param(name, format!("must be finite and >= 0, got {value}")));
        }
    }
    let argument = 2.0 * PI * fc * v / SPEED_OF_LIGHT * ts;
    let value = bessel_j0(argument);
    if value < 0.0 {
        return Err(Error::NegativeCorrelation { argument, value });
    }
    Ok(value.min(1.0))
}

/// `1 − Ω²`, the variance of the envelope around its mean.
pub fn envelope_error_variance(params: &RicianParams) -> f64 {
    let omega = rician_mean_envelope(params);
    1.0 - omega * omega
}

/// `√(K/(1+K))·e^{iφ} + √(1/(1+K))·w` with `w ~ CN(0, 1)`.
pub fn sample_rician<R: Rng + ?Sized>(params: &RicianParams, los_phase: f64, rng: &mut R) -> Complex64 {
    let k = params.k;
    let los = (k / (1.0 + k)).sqrt();
    // Each quadrature component of w has variance 1/2.
    let nlos = (0.5 / (1.0 + k)).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::from_polar(los, los_phase) + Complex64::new(re * nlos, im * nlos)
}
