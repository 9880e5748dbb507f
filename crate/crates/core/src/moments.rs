//! First and second moments of the co-phased envelope sum, and the effective
//! noise power that defines the effective transmit SNR.
//!
//! For panels `l` with weights `a_lm = √β_lm⁻¹` and the direct weight
//! `a_0 = √β_0⁻¹`, the envelope is
//! `H = Σ_l ρ_l Σ_m a_lm |ĝ_lm||h_lm| + ρ_0 a_0 |ĝ_0|`.
//! The centralized variable `Z` is the one-panel case. All per-element
//! variables are independent with `E|x| = Ω` and `E|x|² = 1`, so
//!
//! * `E(H) = Σ_l c_l + ρ_0 Ω_0 a_0` with `c_l = ρ_l Ω_1l Ω_2l Σ_m a_lm`,
//! * `E(H²) = Σ_l ρ_l² [Σ_m a_lm² + (Ω_1l Ω_2l)² ((Σ_m a_lm)² − Σ_m a_lm²)]
//!   + ((Σ_l c_l)² − Σ_l c_l²) + 2 ρ_0 Ω_0 a_0 Σ_l c_l + ρ_0² a_0²`,
//! * `Var(H) = Σ_l ρ_l² (1 − Ω_1l² Ω_2l²) Σ_m a_lm² + ρ_0² (1 − Ω_0²) a_0²`.
//!
//! The variance is accumulated from its own non-negative terms rather than
//! by cancellation. Double sums use `(Σa)² − Σa²`, so every kernel is O(M).

use crate::error::{Error, Result};
use crate::summation::{sum, Neumaier};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

/// One panel seen by the moment kernels.
#[derive(Debug, Clone, Copy)]
pub struct PanelWeights<'a> {
    /// `β_m⁻¹` per element.
    pub beta_inv: &'a [f64],
    /// Mean envelope of the BS-panel channel.
    pub omega1: f64,
    /// Mean envelope of the panel-user channel.
    pub omega2: f64,
    pub rho: f64,
}

/// The direct BS-user link; all fields zero when it is absent.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectWeights {
    pub beta_inv: f64,
    pub omega0: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveSnr {
    pub gamma_teff: f64,
    pub noise_variance: f64,
}

pub fn distributed_moments(panels: &[PanelWeights<'_>], direct: &DirectWeights) -> MomentSummary {
    let mut coherent = Neumaier::default();
    let mut coherent_sq = Neumaier::default();
    let mut incoherent = Neumaier::default();
    let mut variance = Neumaier::default();

    for p in panels {
        let s1 = sum(p.beta_inv.iter().map(|b| b.sqrt()));
        let s2 = sum(p.beta_inv.iter().copied());
        let w = p.omega1 * p.omega2;
        let rho2 = p.rho * p.rho;
        let c = p.rho * w * s1;
        coherent.add(c);
        coherent_sq.add(c * c);
        incoherent.add(rho2 * s2);
        incoherent.add(rho2 * w * w * (s1 * s1 - s2));
        variance.add(rho2 * (1.0 - w * w) * s2);
    }

    let a0 = direct.beta_inv.sqrt();
    let d = direct.rho * direct.omega0 * a0;
    let rho0_sq = direct.rho * direct.rho;
    let c_total = coherent.total();

    let mean = c_total + d;
    let second_moment = sum([
        incoherent.total(),
        c_total * c_total - coherent_sq.total(),
        2.0 * d * c_total,
        rho0_sq * direct.beta_inv,
    ]);
    variance.add(rho0_sq * (1.0 - direct.omega0 * direct.omega0) * direct.beta_inv);

    MomentSummary {
        mean,
        second_moment,
        variance: variance.total().max(0.0),
    }
}

pub fn centralized_moments(
    beta_inv: &[f64],
    omega1: f64,
    omega2: f64,
    omega0: f64,
    rho_c: f64,
    rho0: f64,
    beta0_direct_inv: f64,
) -> MomentSummary {
    let panel = PanelWeights {
        beta_inv,
        omega1,
        omega2,
        rho: rho_c,
    };
    let direct = DirectWeights {
        beta_inv: beta0_direct_inv,
        omega0,
        rho: rho0,
    };
    distributed_moments(&[panel], &direct)
}

/// `σ²_eff = P Σ_l ρ̄_l² (1 − Ω_2l²) Σ_m β_lm⁻¹ + P ρ̄_0² (1 − Ω_0²) β_0⁻¹ + σ_0²`.
pub fn distributed_noise_variance(
    tx_power: f64,
    panels: &[PanelWeights<'_>],
    direct: &DirectWeights,
    sigma0_sq: f64,
) -> Result<EffectiveSnr> {
    if !(tx_power > 0.0 && tx_power.is_finite()) {
        return Err(Error::param("tx_power", "power must be positive"));
    }
    if !(sigma0_sq > 0.0 && sigma0_sq.is_finite()) {
        return Err(Error::param("noise_power", "power must be positive"));
    }
    let rho_bar_sq = |rho: f64| (1.0 - rho * rho).max(0.0);
    let mut outdated = Neumaier::default();
    for p in panels {
        let s2 = sum(p.beta_inv.iter().copied());
        outdated.add(rho_bar_sq(p.rho) * (1.0 - p.omega2 * p.omega2) * s2);
    }
    outdated.add(rho_bar_sq(direct.rho) * (1.0 - direct.omega0 * direct.omega0) * direct.beta_inv);
    let noise_variance = tx_power * outdated.total() + sigma0_sq;
    Ok(EffectiveSnr {
        gamma_teff: tx_power / noise_variance,
        noise_variance,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn centralized_noise_variance(
    tx_power: f64,
    rho_c: f64,
    rho0: f64,
    omega2: f64,
    omega0: f64,
    beta_inv: &[f64],
    beta0_direct_inv: f64,
    sigma0_sq: f64,
) -> Result<EffectiveSnr> {
    let panel = PanelWeights {
        beta_inv,
        omega1: 1.0,
        omega2,
        rho: rho_c,
    };
    let direct = DirectWeights {
        beta_inv: beta0_direct_inv,
        omega0,
        rho: rho0,
    };
    distributed_noise_variance(tx_power, &[panel], &direct, sigma0_sq)
}

/// High-power limit of the effective SNR, `1 / (Σ_l ρ̄_l²(1−Ω_2l²)Σβ⁻¹ + ρ̄_0²(1−Ω_0²)β_0⁻¹)`.
/// Infinite when every correlation is 1.
pub fn saturated_snr(panels: &[PanelWeights<'_>], direct: &DirectWeights) -> f64 {
    let rho_bar_sq = |rho: f64| (1.0 - rho * rho).max(0.0);
    let mut acc = Neumaier::default();
    for p in panels {
        acc.add(rho_bar_sq(p.rho) * (1.0 - p.omega2 * p.omega2) * sum(p.beta_inv.iter().copied()));
    }
    acc.add(rho_bar_sq(direct.rho) * (1.0 - direct.omega0 * direct.omega0) * direct.beta_inv);
    1.0 / acc.total()
}
