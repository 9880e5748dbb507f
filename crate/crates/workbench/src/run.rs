//! Single-scenario evaluation: analytic report plus optional Monte Carlo.

use riscap_core::capacity::CapacityReport;
use riscap_core::link::PropagationMode;
use riscap_core::montecarlo::{simulate_ec, McEstimate, TrialConfig};

use crate::error::Result;
use crate::scenario::{ModeSetting, ScenarioFile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trials: usize,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl McOptions {
    pub fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            workers: self.workers,
            ..TrialConfig::new(self.trials, self.seed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub mode: Option<ModeSetting>,
    pub mc: Option<McOptions>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: PropagationMode,
    /// BS distance and near-field boundary of every panel (m).
    pub d1: Vec<f64>,
    pub boundaries: Vec<f64>,
    pub capacity: CapacityReport,
    pub mc: Option<McEstimate>,
    pub warnings: Vec<String>,
}

impl RunReport {
    /// Largest panel boundary (m).
    pub fn d_boundary(&self) -> f64 {
        self.boundaries.iter().copied().fold(0.0, f64::max)
    }
}

pub fn run_scenario(file: &ScenarioFile, opts: &RunOptions) -> Result<RunReport> {
    let resolved = file.resolve(opts.mode)?;
    let link = &resolved.link;
    let capacity = link.analyze()?;
    let mc = match &opts.mc {
        Some(m) => Some(simulate_ec(link, capacity.gamma_teff, &m.trial_config())?),
        None => None,
    };
    Ok(RunReport {
        mode: link.mode,
        d1: link.panels.iter().map(|p| p.d1).collect(),
        boundaries: link.panels.iter().map(|p| p.boundary).collect(),
        capacity,
        mc,
        warnings: resolved.warnings,
    })
}

/// `key = value` lines describing a report.
pub fn format_report(r: &RunReport) -> String {
    let c = &r.capacity;
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    line("mode", format!("\"{}\"", r.mode.as_str()));
    line("d1_m", list(&r.d1));
    line("d_boundary_m", list(&r.boundaries));
    line("gamma_teff", c.gamma_teff.to_string());
    line("snr_mean", c.snr_mean.to_string());
    line("snr_variance", c.snr_variance.to_string());
    if let Some(fit) = &c.fit {
        line("gamma_shape", fit.shape.to_string());
        line("gamma_rate", fit.rate.to_string());
    }
    line("ec_approx", c.ec_approx.to_string());
    line("ec_ub", c.ec_upper.to_string());
    line("ec_lb", c.ec_lower.to_string());
    if let Some(mc) = &r.mc {
        line("ec_mc", mc.mean_ec.to_string());
        line("mc_stderr", mc.std_error.to_string());
        line("mc_trials", mc.trials.to_string());
    }
    out
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}
