//! Monte Carlo oracle for the co-phased envelope and the ergodic capacity.
//!
//! Each trial draws every channel as a complex Rician sample, applies the
//! co-phasing rule `φ_m = arg ĥ_0 − (arg ĝ_m + arg h_m)` and takes the modulus
//! of `Σ_l ρ_l Σ_m a_lm ĝ_lm h_lm e^{jφ_m} + ρ_0 a_0 ĥ_0`. The SNR is
//! `γ_teff` times its square, with `γ_teff` supplied by the caller.
//!
//! Trials are grouped in blocks of `block_size`. Block `j` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `j`, so the samples do not
//! depend on how blocks are scheduled over workers. Reductions run in trial
//! order with compensated summation.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{sample_rician, RicianParams};
use crate::error::{Error, Result};
use crate::link::ResolvedLink;
use crate::summation::Neumaier;

/// Line-of-sight phase of every sampled channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LosPhase {
    #[default]
    Zero,
    Fixed(f64),
    /// Independent uniform phase per channel and trial.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub block_size: usize,
    pub los_phase: LosPhase,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub retain_samples: bool,
}

impl TrialConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            block_size: 1024,
            los_phase: LosPhase::Zero,
            workers: None,
            retain_samples: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        if self.block_size == 0 {
            return Err(Error::param("block_size", "must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::param("workers", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean_ec: f64,
    pub std_error: f64,
    pub trials: usize,
    /// Per-trial SNR, in trial order, when requested.
    pub snr_samples: Option<Vec<f64>>,
}

fn draw<R: Rng>(params: &RicianParams, phase: LosPhase, rng: &mut R) -> Complex64 {
    let los = match phase {
        LosPhase::Zero => 0.0,
        LosPhase::Fixed(p) => p,
        LosPhase::Uniform => rng.random::<f64>() * TAU,
    };
    sample_rician(params, los, rng)
}

fn unit(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n > 0.0 {
        z / n
    } else {
        Complex64::new(1.0, 0.0)
    }
}

struct Weights<'a> {
    panels: Vec<(&'a [f64], RicianParams, RicianParams, f64)>,
    direct: Option<(f64, RicianParams, f64)>,
}

fn trial<R: Rng>(w: &Weights<'_>, phase: LosPhase, rng: &mut R) -> f64 {
    let (direct, reference) = match w.direct {
        Some((a0, k0, rho0)) => {
            let h0 = draw(&k0, phase, rng);
            (rho0 * a0 * h0, unit(h0))
        }
        None => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    let mut total = direct;
    for (a, k1, k2, rho) in &w.panels {
        let mut acc = Complex64::new(0.0, 0.0);
        for a_m in a.iter() {
            let h = draw(k1, phase, rng);
            let g = draw(k2, phase, rng);
            let cascade = g * h;
            // e^{jφ_m} rotates the cascade onto the direct-link phase.
            let shift = reference * unit(cascade).conj();
            acc += *a_m * cascade * shift;
        }
        total += *rho * acc;
    }
    total.norm()
}

fn run_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| Error::param("workers", e.to_string())),
    }
}

/// Envelope samples in trial order.
pub fn sample_envelopes(link: &ResolvedLink, cfg: &TrialConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if link.element_count() == 0 && link.direct.is_none() {
        return Err(Error::InvalidScenario("no reflecting element and no direct link".into()));
    }
    let roots: Vec<Vec<f64>> = link
        .panels
        .iter()
        .map(|p| p.beta_inv.iter().map(|b| b.sqrt()).collect())
        .collect();
    let w = Weights {
        panels: link
            .panels
            .iter()
            .zip(&roots)
            .map(|(p, r)| (r.as_slice(), p.k1, p.k2, p.rho))
            .collect(),
        direct: link.direct.map(|d| (d.beta_inv.sqrt(), d.k0, d.rho)),
    };
    let blocks = cfg.trials.div_ceil(cfg.block_size);
    let per_block = |j: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(j as u64);
        let start = j * cfg.block_size;
        let n = cfg.block_size.min(cfg.trials - start);
        (0..n).map(|_| trial(&w, cfg.los_phase, &mut rng)).collect::<Vec<f64>>()
    };
    let chunks: Vec<Vec<f64>> = run_pool(cfg.workers, || (0..blocks).into_par_iter().map(per_block).collect())?;
    Ok(chunks.concat())
}

/// Capacity estimate from envelope samples; deterministic in sample order.
pub fn ec_from_envelopes(envelopes: &[f64], gamma_teff: f64, retain_samples: bool) -> Result<McEstimate> {
    if envelopes.is_empty() {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let mut s1 = Neumaier::default();
    let mut s2 = Neumaier::default();
    for z in envelopes {
        let c = (gamma_teff * z * z).ln_1p() / LN_2;
        s1.add(c);
        s2.add(c * c);
    }
    let n = envelopes.len() as f64;
    let mean = s1.total() / n;
    let var = if envelopes.len() > 1 {
        ((s2.total() - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean_ec: mean,
        std_error: (var / n).sqrt(),
        trials: envelopes.len(),
        snr_samples: retain_samples.then(|| envelopes.iter().map(|z| gamma_teff * z * z).collect()),
    })
}

pub fn simulate_ec(link: &ResolvedLink, gamma_teff: f64, cfg: &TrialConfig) -> Result<McEstimate> {
    let env = sample_envelopes(link, cfg)?;
    ec_from_envelopes(&env, gamma_teff, cfg.retain_samples)
}

/// Fraction of samples `≤ x` for every grid point.
pub fn empirical_cdf(samples: &[f64], grid: &[f64]) -> Vec<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    grid.iter()
        .map(|x| sorted.partition_point(|s| s <= x) as f64 / n)
        .collect()
}

pub fn empirical_snr_cdf(link: &ResolvedLink, gamma_teff: f64, cfg: &TrialConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let snr: Vec<f64> = sample_envelopes(link, cfg)?
        .into_iter()
        .map(|z| gamma_teff * z * z)
        .collect();
    Ok(empirical_cdf(&snr, grid))
}

/// Kolmogorov-Smirnov distance between the samples and a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
