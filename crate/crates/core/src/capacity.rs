//! Gamma moment matching, the SNR distribution and the ergodic capacity.
//!
//! The envelope `Z` is approximated by `Gamma(a, b)` with `a = E(Z)²/Var(Z)`
//! and `b = E(Z)/Var(Z)`; the SNR is `γ = γ_teff·Z²`, so
//! `F(γ) = P(a, b·√(γ/γ_teff))` with `P` the regularized lower incomplete gamma.
//!
//! The capacity uses the integration-by-parts form
//! `EC = (1/ln 2)·∫_0^∞ (1 − F(γ))/(1 + γ) dγ`,
//! which is analytically equal to the Meijer-G expression
//! `2^{a−1}/(√π·Γ(a)·ln 2)·G^{5,1}_{3,5}[b²/(4γ_teff) | ½,1,0 ; a/2,(a+1)/2,0,½,0]`.
//! The normalizing factor is read as `Γ(a)` and the power of two as `2^{a−1}`.
//! The substitutions `γ = s²` and `s = t/(1−t)` compactify the range to `t ∈ [0, 1]`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::moments::MomentSummary;
use crate::quadrature::integrate;
use crate::special::{gamma_p, gamma_q};

/// Relative variance below which the envelope is treated as deterministic.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;
/// Absolute tolerance on the ergodic capacity (bits/s/Hz).
pub const EC_TOLERANCE: f64 = 1e-8;
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: f64,
    pub rate: f64,
}

impl GammaFit {
    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }
}

pub fn gamma_fit(moments: &MomentSummary) -> Result<GammaFit> {
    let MomentSummary { mean, variance, .. } = *moments;
    if !(mean > 0.0) || !(variance > DEGENERATE_VARIANCE * mean * mean) || !variance.is_finite() {
        return Err(Error::DegenerateDistribution { mean, variance });
    }
    Ok(GammaFit {
        shape: mean * mean / variance,
        rate: mean / variance,
    })
}

/// `P(γ_max ≤ γ)`.
pub fn snr_cdf(gamma: f64, fit: &GammaFit, gamma_teff: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    gamma_p(fit.shape, fit.rate * (gamma / gamma_teff).sqrt())
}

pub fn ergodic_capacity(fit: &GammaFit, gamma_teff: f64) -> Result<f64> {
    if !(gamma_teff >= 0.0) {
        return Err(Error::param("gamma_teff", "effective SNR must be >= 0"));
    }
    if gamma_teff == 0.0 {
        return Ok(0.0);
    }
    let GammaFit { shape: a, rate: b } = *fit;
    let scale = gamma_teff.sqrt();
    // Q(a, b·z) with z = s/√γ_teff; integrand 2s/(1+s²)·ds/dt.
    let integrand = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t;
        let s = t / u;
        let tail = gamma_q(a, b * s / scale);
        if tail == 0.0 {
            return 0.0;
        }
        tail * 2.0 * s / (1.0 + s * s) / (u * u)
    };
    let mean = a / b;
    let sd = a.sqrt() / b;
    let breaks: Vec<f64> = [-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0]
        .iter()
        .map(|k| mean + k * sd)
        .filter(|z| *z > 0.0)
        .map(|z| {
            let s = z * scale;
            s / (1.0 + s)
        })
        .collect();
    let q = integrate(integrand, 0.0, 1.0, &breaks, EC_TOLERANCE * LN_2, MAX_INTERVALS)?;
    Ok(q.value.max(0.0) / LN_2)
}

/// `E(γ_max) = γ_teff·a(a+1)/b²`.
pub fn snr_mean(fit: &GammaFit, gamma_teff: f64) -> f64 {
    let GammaFit { shape: a, rate: b } = *fit;
    gamma_teff * a * (a + 1.0) / (b * b)
}

/// `Var(γ_max) = γ_teff²/b⁴·(Γ(a+4)/Γ(a) − Γ(a+2)²/Γ(a)²) = γ_teff²·a(a+1)(4a+6)/b⁴`.
pub fn snr_variance(fit: &GammaFit, gamma_teff: f64) -> f64 {
    let GammaFit { shape: a, rate: b } = *fit;
    let b2 = b * b;
    gamma_teff * gamma_teff * a * (a + 1.0) * (4.0 * a + 6.0) / (b2 * b2)
}

/// `log2(1 + E(γ))`.
pub fn ec_upper_bound(snr_mean: f64) -> f64 {
    snr_mean.max(0.0).ln_1p() / LN_2
}

/// Second-order approximate lower bound `log2(1 + (1/E(γ) + Var(γ)/E(γ)³)⁻¹)`.
pub fn ec_lower_bound(snr_mean: f64, snr_variance: f64) -> f64 {
    if !(snr_mean > 0.0) {
        return 0.0;
    }
    let inv = 1.0 / snr_mean + snr_variance / (snr_mean * snr_mean * snr_mean);
    (1.0 / inv).ln_1p() / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    pub ec_approx: f64,
    pub ec_upper: f64,
    /// Approximate lower bound; it may exceed the true capacity slightly.
    pub ec_lower: f64,
    pub snr_mean: f64,
    pub snr_variance: f64,
    pub gamma_teff: f64,
    /// `None` when the envelope is deterministic and the fallback was used.
    pub fit: Option<GammaFit>,
}

impl CapacityReport {
    /// Full analysis; a deterministic envelope falls back to `log2(1 + γ_teff·E(Z)²)`.
    pub fn from_moments(moments: &MomentSummary, gamma_teff: f64) -> Result<Self> {
        match gamma_fit(moments) {
            Ok(fit) => {
                let mean = snr_mean(&fit, gamma_teff);
                let var = snr_variance(&fit, gamma_teff);
                Ok(Self {
                    ec_approx: ergodic_capacity(&fit, gamma_teff)?,
                    ec_upper: ec_upper_bound(mean),
                    ec_lower: ec_lower_bound(mean, var),
                    snr_mean: mean,
                    snr_variance: var,
                    gamma_teff,
                    fit: Some(fit),
                })
            }
            Err(Error::DegenerateDistribution { mean, .. }) => {
                let snr = gamma_teff * mean.max(0.0).powi(2);
                let ec = ec_upper_bound(snr);
                Ok(Self {
                    ec_approx: ec,
                    ec_upper: ec,
                    ec_lower: ec,
                    snr_mean: snr,
                    snr_variance: 0.0,
                    gamma_teff,
                    fit: None,
                })
            }
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn summary(mean: f64, variance: f64) -> MomentSummary {
        MomentSummary {
            mean,
            second_moment: variance + mean * mean,
            variance,
        }
    }

    #[test]
    fn fit_trivial_cases() {
        assert_eq!(gamma_fit(&summary(1.0, 1.0)).unwrap(), GammaFit { shape: 1.0, rate: 1.0 });
        assert_eq!(gamma_fit(&summary(2.0, 1.0)).unwrap(), GammaFit { shape: 4.0, rate: 2.0 });
        assert!(matches!(
            gamma_fit(&summary(1.0, 1e-13)),
            Err(Error::DegenerateDistribution { .. })
        ));
        assert!(gamma_fit(&summary(0.0, 0.0)).is_err());
    }

    #[test]
    fn cdf_endpoints_and_closed_form() {
        let fit = GammaFit { shape: 2.0, rate: 1.0 };
        assert_eq!(snr_cdf(0.0, &fit, 1.0), 0.0);
        assert!(snr_cdf(1e6, &fit, 1.0) > 1.0 - 1e-12);
        assert_relative_eq!(snr_cdf(1.0, &fit, 1.0), 1.0 - 2.0 * (-1f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn snr_moment_identities() {
        let fit = GammaFit { shape: 1.0, rate: 1.0 };
        assert_eq!(snr_mean(&fit, 1.0), 2.0);
        assert_eq!(snr_variance(&fit, 1.0), 20.0);
        let f = GammaFit { shape: 3.7, rate: 0.4 };
        assert_relative_eq!(snr_mean(&f, 2.0), 2.0 * snr_mean(&f, 1.0), max_relative = 1e-15);
        assert_relative_eq!(snr_variance(&f, 2.0), 4.0 * snr_variance(&f, 1.0), max_relative = 1e-15);
        assert_relative_eq!(snr_mean(&f, 1.0), f.mean().powi(2) + f.variance(), max_relative = 1e-14);
    }

    #[test]
    fn bounds_trivial_cases() {
        assert_eq!(ec_upper_bound(0.0), 0.0);
        assert_eq!(ec_lower_bound(0.0, 5.0), 0.0);
        assert!(ec_lower_bound(1e-12, 1e-24) < 1e-11);
        assert_relative_eq!(ec_lower_bound(7.0, 0.0), ec_upper_bound(7.0), max_relative = 1e-15);
        assert!(ec_lower_bound(7.0, 10.0) < ec_upper_bound(7.0));
    }

    // Reference values from an arbitrary-precision evaluation of the defining integral.
    #[test]
    fn capacity_reference_values() {
        let cases = [
            (2.0, 1.0, 10.0, 4.735_755_676_577_181),
            (1.0, 1.0, 1.0, 0.990_779_364_576_036_8),
            (50.0, 5.0, 0.01, 1.000_021_355_671_162_8),
            (0.5, 2.0, 100.0, 2.061_715_804_076_714),
        ];
        for (a, b, g, expected) in cases {
            let ec = ergodic_capacity(&GammaFit { shape: a, rate: b }, g).unwrap();
            assert!((ec - expected).abs() < 1e-8, "a={a} b={b} g={g}: {ec} vs {expected}");
        }
    }

    #[test]
    fn capacity_limits() {
        let fit = GammaFit { shape: 2.0, rate: 1.0 };
        assert_eq!(ergodic_capacity(&fit, 0.0).unwrap(), 0.0);
        assert!(ergodic_capacity(&fit, 1e-12).unwrap() < 1e-10);
        let zbar: f64 = 0.8;
        let g = 30.0;
        let a = 1e7;
        let ec = ergodic_capacity(&GammaFit { shape: a, rate: a / zbar }, g).unwrap();
        assert_relative_eq!(ec, (1.0 + g * zbar * zbar).log2(), max_relative = 1e-6);
    }

    #[test]
    fn extreme_snr_scales() {
        let fit = GammaFit { shape: 900.0, rate: 900.0 / 3e-6 };
        for g in [1e6, 1e12, 1e16] {
            let ec = ergodic_capacity(&fit, g).unwrap();
            let ub = ec_upper_bound(snr_mean(&fit, g));
            assert!(ec <= ub + 1e-8 && ec > ub - 0.01, "g={g}: {ec} vs {ub}");
        }
    }

    #[test]
    fn degenerate_fallback() {
        let r = CapacityReport::from_moments(&summary(0.5, 0.0), 8.0).unwrap();
        assert!(r.fit.is_none());
        assert_relative_eq!(r.ec_approx, 1f64.log2() + 3f64.log2(), max_relative = 1e-15);
        assert_eq!(r.ec_upper, r.ec_lower);
        assert_eq!(CapacityReport::from_moments(&summary(0.0, 0.0), 8.0).unwrap().ec_approx, 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn cdf_is_monotone(a in 0.2f64..500.0, b in 0.01f64..100.0, g in 1e-3f64..1e6) {
                let fit = GammaFit { shape: a, rate: b };
                let top = 50.0 * snr_mean(&fit, g) + 1.0;
                let mut prev = 0.0;
                for i in 0..=1000 {
                    let x = top * (i as f64 / 1000.0).powi(3);
                    let f = snr_cdf(x, &fit, g);
                    prop_assert!((0.0..=1.0).contains(&f));
                    prop_assert!(f >= prev - 1e-15);
                    prev = f;
                }
                prop_assert!(prev > 1.0 - 1e-6);
            }

            #[test]
            fn capacity_monotone_in_snr_and_within_jensen(
                a in 0.3f64..300.0, b in 0.05f64..20.0, g in 1e-3f64..1e4, up in 1.01f64..10.0,
            ) {
                let fit = GammaFit { shape: a, rate: b };
                let lo = ergodic_capacity(&fit, g).unwrap();
                let hi = ergodic_capacity(&fit, g * up).unwrap();
                prop_assert!(hi >= lo - 2e-8);
                prop_assert!(lo <= ec_upper_bound(snr_mean(&fit, g)) + 2e-8);
            }

            #[test]
            fn capacity_monotone_in_shape_at_fixed_rate(
                a in 0.3f64..100.0, da in 0.1f64..50.0, b in 0.05f64..20.0, g in 1e-2f64..1e3,
            ) {
                // Gamma(a, b) is stochastically increasing in a.
                let lower = ergodic_capacity(&GammaFit { shape: a, rate: b }, g).unwrap();
                let upper = ergodic_capacity(&GammaFit { shape: a + da, rate: b }, g).unwrap();
                prop_assert!(upper >= lower - 2e-8);
            }
        }
    }
}
