//! Cross-checks of the analytic pipeline against the Monte Carlo oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use riscap_core::capacity::{ergodic_capacity, gamma_fit, GammaFit};
use riscap_core::channel::{CsiAging, RicianParams};
use riscap_core::geometry::{Point3, RisPanel};
use riscap_core::link::{DirectSpec, PanelSpec, PropagationMode, ResolvedLink, Scenario};
use riscap_core::moments::MomentSummary;
use riscap_core::montecarlo::{ec_from_envelopes, sample_envelopes, LosPhase, TrialConfig};
use riscap_core::pathloss::LinkBudget;
use riscap_core::SPEED_OF_LIGHT;

fn lambda() -> f64 {
    SPEED_OF_LIGHT / 5e9
}

fn budget(p_dbm: f64) -> LinkBudget {
    LinkBudget {
        gt: 100.0,
        gr: 1.0,
        tx_power: 1e-3 * 10f64.powf(p_dbm / 10.0),
        noise_power: 1e-15,
        eta_db: -30.0,
        xi: 3.5,
    }
}

fn panel(center: Point3, mx: usize, my: usize, k: f64, rho: f64) -> PanelSpec {
    let d = lambda() / 8.0;
    PanelSpec {
        panel: RisPanel::new(center, mx, my, d, d).unwrap(),
        k1: RicianParams::new(k).unwrap(),
        k2: RicianParams::new(k).unwrap(),
        aging: CsiAging::new(rho).unwrap(),
    }
}

fn table_one(panels: Vec<PanelSpec>, k0: f64, p_dbm: f64) -> Scenario {
    Scenario {
        bs: Point3::new(-50.0, 0.0, 10.0),
        user: Point3::new(50.0, 0.0, 10.0),
        panels,
        direct: Some(DirectSpec {
            k0: RicianParams::new(k0).unwrap(),
            aging: CsiAging::new(0.95).unwrap(),
        }),
        budget: budget(p_dbm),
        wavelength: lambda(),
    }
}

fn fig2(m: usize, p_dbm: f64) -> ResolvedLink {
    let k = 10f64.powf(0.3);
    table_one(vec![panel(Point3::new(-49.5, 0.0, 9.5), m, m, k, 0.9)], k, p_dbm)
        .resolve(PropagationMode::Near)
        .unwrap()
}

fn sample_moments(x: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let m1 = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| v * v).sum::<f64>() / n;
    let m4 = x.iter().map(|v| v.powi(4)).sum::<f64>() / n;
    // Standard errors of the sample mean and of the sample second moment.
    let se1 = ((m2 - m1 * m1) / n).sqrt();
    let se2 = ((m4 - m2 * m2) / n).sqrt();
    (m1, m2, se1, se2)
}

#[test]
fn envelope_moments_match_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..6 {
        let panels: Vec<PanelSpec> = (0..rng.random_range(1..=3))
            .map(|_| {
                let x = rng.random_range(-49.8..49.8);
                panel(
                    Point3::new(x, rng.random_range(-0.5..0.5), rng.random_range(9.0..9.8)),
                    rng.random_range(1..6),
                    rng.random_range(1..6),
                    rng.random_range(0.0..8.0),
                    rng.random_range(0.3..1.0),
                )
            })
            .collect();
        let mut s = table_one(panels, rng.random_range(0.0..8.0), 0.0);
        if case % 2 == 1 {
            s.direct = None;
        }
        let link = s.resolve(PropagationMode::Near).unwrap();
        let analytic: MomentSummary = link.moments();
        let env = sample_envelopes(&link, &TrialConfig::new(200_000, 100 + case)).unwrap();
        let (m1, m2, se1, se2) = sample_moments(&env);
        assert!((m1 - analytic.mean).abs() < 3.0 * se1, "case {case}: mean {m1} vs {}", analytic.mean);
        assert!(
            (m2 - analytic.second_moment).abs() < 3.0 * se2,
            "case {case}: second moment {m2} vs {}",
            analytic.second_moment
        );
    }
}

#[test]
fn capacity_integral_matches_gamma_sampling() {
    let fit = GammaFit { shape: 2.0, rate: 1.0 };
    let exact = ergodic_capacity(&fit, 10.0).unwrap();
    let gamma = Gamma::new(2.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z: Vec<f64> = (0..400_000).map(|_| gamma.sample(&mut rng)).collect();
    let est = ec_from_envelopes(&z, 10.0, false).unwrap();
    assert!((est.mean_ec - exact).abs() < 3.5 * est.std_error, "{} vs {exact}", est.mean_ec);
}

#[test]
fn gamma_fit_recovers_sampled_parameters() {
    let gamma = Gamma::new(3.0, 1.0 / 5.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let z: Vec<f64> = (0..400_000).map(|_| gamma.sample(&mut rng)).collect();
    let (m1, m2, _, _) = sample_moments(&z);
    let fit = gamma_fit(&MomentSummary {
        mean: m1,
        second_moment: m2,
        variance: m2 - m1 * m1,
    })
    .unwrap();
    assert!((fit.shape / 3.0 - 1.0).abs() < 0.02, "{fit:?}");
    assert!((fit.rate / 5.0 - 1.0).abs() < 0.02, "{fit:?}");
}

#[test]
fn small_panel_capacity_matches_simulation() {
    for p in [-20.0, 0.0, 20.0] {
        let link = fig2(12, p);
        let report = link.analyze().unwrap();
        let env = sample_envelopes(&link, &TrialConfig::new(50_000, 3)).unwrap();
        let mc = ec_from_envelopes(&env, report.gamma_teff, false).unwrap();
        let rel = (report.ec_approx - mc.mean_ec).abs() / mc.mean_ec;
        assert!(rel < 0.02, "P = {p}: {} vs {}", report.ec_approx, mc.mean_ec);
        assert!(report.ec_lower <= mc.mean_ec + 0.05);
        assert!(mc.mean_ec <= report.ec_upper + 3.0 * mc.std_error);
    }
}

#[test]
fn random_line_of_sight_phases_leave_capacity_unchanged() {
    let link = fig2(8, 0.0);
    let g = link.effective_snr().unwrap().gamma_teff;
    let zero = TrialConfig::new(100_000, 21);
    let uniform = TrialConfig {
        los_phase: LosPhase::Uniform,
        seed: 22,
        ..zero
    };
    let a = ec_from_envelopes(&sample_envelopes(&link, &zero).unwrap(), g, false).unwrap();
    let b = ec_from_envelopes(&sample_envelopes(&link, &uniform).unwrap(), g, false).unwrap();
    let z = (a.mean_ec - b.mean_ec) / (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    // Two-sided 1% level.
    assert!(z.abs() < 2.576, "z = {z}");
}

#[test]
fn capacity_grows_with_power_and_saturates() {
    let mut last = f64::NEG_INFINITY;
    for p in (-20..=80).step_by(10) {
        let ec = fig2(24, p as f64).analyze().unwrap().ec_approx;
        assert!(ec >= last, "P = {p}");
        last = ec;
    }
    let high = fig2(24, 60.0).analyze().unwrap().ec_approx;
    let higher = fig2(24, 40.0).analyze().unwrap().ec_approx;
    assert!(high - higher < 0.05);
    let link = fig2(24, 0.0);
    let limit = link.saturated_snr();
    let g = link.with_tx_power(1e12).effective_snr().unwrap().gamma_teff;
    assert!((g / limit - 1.0).abs() < 1e-9);
}

#[test]
fn monte_carlo_is_monotone_in_correlation_with_paired_seeds() {
    let k = 10f64.powf(0.3);
    let cfg = TrialConfig::new(20_000, 8);
    let mut last = f64::NEG_INFINITY;
    for rho in [0.5, 0.7, 0.9, 1.0] {
        let link = table_one(vec![panel(Point3::new(-49.5, 0.0, 9.5), 8, 8, k, rho)], k, 0.0)
            .resolve(PropagationMode::Near)
            .unwrap();
        let g = link.effective_snr().unwrap().gamma_teff;
        let ec = ec_from_envelopes(&sample_envelopes(&link, &cfg).unwrap(), g, false).unwrap().mean_ec;
        assert!(ec > last, "rho = {rho}");
        last = ec;
    }
}
