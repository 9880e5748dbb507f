//! Figure-reproduction presets.
//!
//! All presets start from the same baseline: BS at (−50, 0, 10) m, user at
//! (50, 0, 10) m, 5 GHz carrier, σ₀² = −120 dBm, G_t = 20 dB, G_r = 0 dB,
//! η = −30 dB, ξ = 3.5, K₀ = K₁ = K₂ = 3 dB, ρ₀ = 0.95, ρ = 0.9, λ/8 cells,
//! direct link present, general (per-element) formula. Each preset documents
//! what it changes in its notes, which are also written into the CSV output.
//!
//! The Monte Carlo column is requested only where the sweep keeps the geometry
//! fixed (transmit-power sweeps) or the preset exists to check agreement; add
//! `mc` through `riscap sweep` for the other curves.

use riscap_core::geometry::Point3;
use riscap_core::SPEED_OF_LIGHT;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{
    Budget, Channel, Correlation, Deployment, KFactor, ModeSetting, MonteCarlo, PanelEntry, ScenarioFile,
};
use crate::sweep::{run_sweep, Output, SweepOptions, SweepResult, SweepSpec, SweepVar};
use crate::table::write_table;

pub const NAMES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];
pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

const FC_HZ: f64 = 5e9;
const LAMBDA: f64 = SPEED_OF_LIGHT / FC_HZ;
/// Near-field location used by the single-panel presets.
pub const NEAR_CENTER: Point3 = Point3::new(-49.5, 0.0, 9.5);
/// Far-field location used by the single-panel presets.
pub const FAR_CENTER: Point3 = Point3::new(0.0, 0.0, 9.5);
/// Distributed pair used for the centralized-versus-distributed comparisons.
pub const PAIR_CENTERS: [Point3; 2] = [Point3::new(-49.0, 0.0, 9.5), Point3::new(49.0, 0.0, 9.5)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub label: String,
    pub scenario: ScenarioFile,
    pub sweep: SweepSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub notes: Vec<String>,
    pub series: Vec<Series>,
}

pub struct SeriesResult {
    pub label: String,
    pub result: SweepResult,
}

impl Preset {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.label == label)
    }

    pub fn without_mc(&self) -> Self {
        let mut p = self.clone();
        for s in &mut p.series {
            s.sweep = s.sweep.without_mc();
        }
        p
    }

    pub fn run(&self, opts: &SweepOptions) -> Result<Vec<SeriesResult>> {
        self.series
            .iter()
            .map(|s| {
                Ok(SeriesResult {
                    label: s.label.clone(),
                    result: run_sweep(&s.scenario, &s.sweep, opts)?,
                })
            })
            .collect()
    }
}

/// Multi-series CSV: preset comments, then one `# series:` block per series.
pub fn to_csv(preset: &Preset, results: &[SeriesResult]) -> String {
    let mut out = format!("# preset: {} ({})\n", preset.name, preset.description);
    for n in &preset.notes {
        out.push_str("# note: ");
        out.push_str(n);
        out.push('\n');
    }
    for r in results {
        out.push_str("# series: ");
        out.push_str(&r.label);
        out.push('\n');
        write_table(&mut out, r.result.var, &r.result.rows);
    }
    out
}

pub fn table_one(deployment: Deployment) -> ScenarioFile {
    ScenarioFile {
        mode: ModeSetting::Auto,
        fc_hz: FC_HZ,
        bs: Point3::new(-50.0, 0.0, 10.0),
        user: Point3::new(50.0, 0.0, 10.0),
        budget: Budget {
            p_dbm: 0.0,
            noise_dbm: -120.0,
            gt_db: 20.0,
            gr_db: 0.0,
            eta_db: -30.0,
            xi: 3.5,
        },
        channel: Channel {
            direct: true,
            clamp_negative_rho: false,
            k0: KFactor::Db { db: 3.0 },
            k1: KFactor::Db { db: 3.0 },
            k2: KFactor::Db { db: 3.0 },
            rho0: Correlation::Value(0.95),
            rho: Correlation::Value(0.9),
        },
        deployment,
        monte_carlo: MonteCarlo::default(),
    }
}

/// Single panel evaluated with the general (per-element) formula.
pub fn centralized(center: Point3, mx: usize, my: usize, cell: f64) -> ScenarioFile {
    ScenarioFile {
        mode: ModeSetting::Near,
        ..table_one(Deployment::Centralized {
            panel: PanelEntry::new(center, mx, my, cell),
        })
    }
}

/// Equal panels evaluated with the general (per-element) formula.
pub fn distributed(centers: &[Point3], mx: usize, my: usize, cell: f64) -> ScenarioFile {
    ScenarioFile {
        mode: ModeSetting::Near,
        ..table_one(Deployment::Distributed {
            panels: centers.iter().map(|c| PanelEntry::new(*c, mx, my, cell)).collect(),
        })
    }
}

fn spec(var: SweepVar, values: Vec<f64>, outputs: &[Output], trials: usize, seed: u64) -> SweepSpec {
    SweepSpec {
        var,
        values,
        outputs: outputs.to_vec(),
        trials,
        seed,
    }
}

fn range(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + i as f64 * step).collect()
}

const ALL: [Output; 4] = [Output::Approx, Output::Ub, Output::Lb, Output::Mc];
const ANALYTIC: [Output; 3] = [Output::Approx, Output::Ub, Output::Lb];

pub fn preset(name: &str, trials: usize, seed: u64) -> Result<Preset> {
    let cell = LAMBDA / 8.0;
    let power = || range(-20.0, 5.0, 9);
    let with_trials = |mut f: ScenarioFile| {
        f.monte_carlo = MonteCarlo { trials, seed };
        f
    };
    let mut series = Vec::new();
    let mut push = |label: String, f: ScenarioFile, s: SweepSpec| {
        series.push(Series {
            label,
            scenario: with_trials(f),
            sweep: s,
        })
    };
    let (description, notes): (&str, Vec<&str>) = match name {
        "fig2" => {
            for k0_db in [0.0, 3.0, 6.0] {
                let k0 = KFactor::Db { db: k0_db };
                for (mx, my) in [(12, 12), (24, 24)] {
                    let mut f = centralized(NEAR_CENTER, mx, my, cell);
                    f.channel.k0 = k0;
                    push(format!("centralized M={} K0={k0_db}dB", mx * my), f, spec(SweepVar::P, power(), &ALL, trials, seed));
                }
                for (mx, my) in [(8, 9), (16, 18)] {
                    let mut f = distributed(&PAIR_CENTERS, mx, my, cell);
                    f.channel.k0 = k0;
                    push(
                        format!("distributed M={} K0={k0_db}dB", 2 * mx * my),
                        f,
                        spec(SweepVar::P, power(), &ALL, trials, seed),
                    );
                }
            }
            (
                "EC versus P for several K0, centralized and distributed",
                vec![
                    "centralized panel at (-49.5, 0, 9.5); distributed pair at (-49, 0, 9.5) and (49, 0, 9.5)",
                    "distributed M=144 uses two 8x9 panels and M=576 two 16x18 panels",
                ],
            )
        }
        "fig3" => {
            let rho: Vec<f64> = (0..=10).map(|i| (20 - i) as f64 / 20.0).collect();
            for (tag, frac) in [("lambda/10", 10.0), ("lambda/8", 8.0), ("lambda/4", 4.0), ("lambda/2", 2.0)] {
                let c = LAMBDA / frac;
                let outputs: &[Output] = if frac == 8.0 { &ALL } else { &ANALYTIC };
                push(
                    format!("centralized 24x24 cell={tag}"),
                    centralized(NEAR_CENTER, 24, 24, c),
                    spec(SweepVar::Rho, rho.clone(), outputs, trials, seed),
                );
                push(
                    format!("distributed 2x16x18 cell={tag}"),
                    distributed(&PAIR_CENTERS, 16, 18, c),
                    spec(SweepVar::Rho, rho.clone(), outputs, trials, seed),
                );
            }
            (
                "EC versus rho for several element sizes, centralized and distributed",
                vec![
                    "rho applies to every panel path; rho0 stays 0.95",
                    "the distributed panel at (49, 0, 9.5) is modelled like the first one, facing up; the comparison is qualitative",
                ],
            )
        }
        "fig4" => {
            let d1 = vec![1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 15.0];
            for (mx, my) in [(40, 40), (30, 40), (20, 40)] {
                for mode in [ModeSetting::Near, ModeSetting::Far] {
                    let mut f = centralized(Point3::new(-50.0, 0.0, 9.0), mx, my, cell);
                    f.budget.p_dbm = -30.0;
                    f.mode = mode;
                    let formula = if mode == ModeSetting::Near { "general" } else { "far-field" };
                    push(format!("{mx}x{my} {formula}"), f, spec(SweepVar::D1, d1.clone(), &ANALYTIC, trials, seed));
                }
            }
            (
                "EC of the general and far-field formulas versus d1",
                vec![
                    "the panel sits directly below the BS and moves down the vertical through it, so d1 is its depth below the BS",
                    "P = -30 dBm keeps the reflected paths comparable to the direct one",
                    "d_boundary_m marks the crossover; far-field rows with d1 <= d_boundary_m lie in the near field",
                ],
            )
        }
        "fig5" => {
            for (tag, frac) in [("lambda/10", 10.0), ("lambda/8", 8.0), ("lambda/6", 6.0), ("lambda/4", 4.0), ("lambda/2", 2.0)] {
                push(
                    format!("24x24 cell={tag}"),
                    centralized(NEAR_CENTER, 24, 24, LAMBDA / frac),
                    spec(SweepVar::P, power(), &ALL, trials, seed),
                );
            }
            ("EC versus P for several unit-cell sizes in the near field", vec!["panel at (-49.5, 0, 9.5)"])
        }
        "fig6" => {
            let near_my = vec![8.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0, 192.0, 256.0, 384.0, 512.0];
            let far_my = vec![8.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0, 160.0];
            for p in [-10.0, 0.0, 10.0] {
                let mut f = centralized(NEAR_CENTER, 24, 24, cell);
                f.budget.p_dbm = p;
                push(format!("near P={p}dBm"), f, spec(SweepVar::My, near_my.clone(), &ANALYTIC, trials, seed));
                let mut f = centralized(FAR_CENTER, 24, 24, cell);
                f.budget.p_dbm = p;
                f.mode = ModeSetting::Far;
                push(format!("far P={p}dBm"), f, spec(SweepVar::My, far_my.clone(), &ANALYTIC, trials, seed));
            }
            (
                "EC versus My with Mx = 24 in the near and far field",
                vec![
                    "near field: panel at (-49.5, 0, 9.5), general formula",
                    "far field: panel at (0, 0, 9.5), far-field formula; My stops at 160 so d1 = 50 m stays beyond the boundary",
                ],
            )
        }
        "fig7" => {
            for (tag, center, mode) in [("near", NEAR_CENTER, ModeSetting::Near), ("far", FAR_CENTER, ModeSetting::Far)] {
                for (mx, my) in [(24, 24), (16, 36), (12, 48)] {
                    let mut f = centralized(center, mx, my, cell);
                    f.mode = mode;
                    push(
                        format!("{tag} {mx}x{my}"),
                        f,
                        spec(SweepVar::P, power(), &ALL, trials, seed),
                    );
                }
            }
            (
                "EC versus P for three panel shapes with 576 elements",
                vec![
                    "near field: panel at (-49.5, 0, 9.5), general formula; far field: panel at (0, 0, 9.5), far-field formula",
                    "Mx counts columns along x (the BS-user axis) and My rows along y",
                ],
            )
        }
        "fig8" => {
            let xs = vec![
                -49.5, -49.0, -48.0, -45.0, -40.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 45.0, 48.0, 49.0, 49.5,
            ];
            let k0s = [0.0, 3.0, 6.0];
            let cases: [(&str, [f64; 2]); 3] = [("case1", [-49.5, -49.0]), ("case2", [49.0, 49.5]), ("case3", [-49.5, 49.5])];
            for rho in [0.9, 1.0] {
                for k0_db in k0s {
                    let mut f = centralized(NEAR_CENTER, 24, 24, cell);
                    f.channel.rho = Correlation::Value(rho);
                    f.channel.k0 = KFactor::Db { db: k0_db };
                    push(format!("centralized 24x24 rho={rho} K0={k0_db}dB"), f, spec(SweepVar::X, xs.clone(), &ANALYTIC, trials, seed));
                }
                for (case, x) in cases {
                    let centers = [Point3::new(x[0], 0.0, 9.5), Point3::new(x[1], 0.0, 9.5)];
                    let mut f = distributed(&centers, 16, 18, cell);
                    f.channel.rho = Correlation::Value(rho);
                    let k0 = k0s.iter().map(|db| 10f64.powf(db / 10.0)).collect();
                    push(format!("{case} 2x16x18 rho={rho}"), f, spec(SweepVar::K0, k0, &ANALYTIC, trials, seed));
                }
            }
            (
                "centralized panel moved along x versus three distributed placements",
                vec![
                    "P = 0 dBm",
                    "case1: panels at x = -49.5 and -49 (both near the BS); case2: x = 49 and 49.5 (both near the user); case3: x = -49.5 and 49.5 (one near each end); all at y = 0, z = 9.5",
                    "centralized series sweep the panel x coordinate; distributed series sweep K0 over 0, 3, 6 dB",
                ],
            )
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(Preset {
        name: name.to_string(),
        description: description.to_string(),
        notes: notes.into_iter().map(str::to_string).collect(),
        series,
    })
}
