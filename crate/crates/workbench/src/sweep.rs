//! One-parameter sweeps over a scenario file.
//!
//! Every point of a sweep reuses the same Monte Carlo seed, so neighbouring
//! points share random numbers. A transmit-power sweep keeps the geometry
//! fixed and therefore samples the envelopes only once.

use std::fmt;
use std::str::FromStr;

use riscap_core::geometry::Point3;
use riscap_core::link::PropagationMode;
use riscap_core::montecarlo::{ec_from_envelopes, sample_envelopes, McEstimate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::run::McOptions;
use crate::scenario::{dbm_to_watts, Correlation, Deployment, KFactor, ModeSetting, ScenarioFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVar {
    /// Transmit power (dBm).
    P,
    /// Correlation of every panel path.
    #[serde(rename = "rho")]
    Rho,
    /// Correlation of the direct path.
    #[serde(rename = "rho0")]
    Rho0,
    /// Rows of every panel.
    My,
    /// BS-to-panel distance (m); each panel slides along the ray from the BS through its center.
    #[serde(rename = "d1")]
    D1,
    /// Square element pitch of every panel (m).
    #[serde(rename = "cell_size")]
    CellSize,
    /// Direct-link Rician factor (linear).
    K0,
    /// Panel center x coordinate (m); centralized deployments only.
    #[serde(rename = "x")]
    X,
}

impl SweepVar {
    pub const ALL: [SweepVar; 8] = [
        SweepVar::P,
        SweepVar::Rho,
        SweepVar::Rho0,
        SweepVar::My,
        SweepVar::D1,
        SweepVar::CellSize,
        SweepVar::K0,
        SweepVar::X,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::P => "P",
            SweepVar::Rho => "rho",
            SweepVar::Rho0 => "rho0",
            SweepVar::My => "My",
            SweepVar::D1 => "d1",
            SweepVar::CellSize => "cell_size",
            SweepVar::K0 => "K0",
            SweepVar::X => "x",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            SweepVar::P => "dBm",
            SweepVar::Rho | SweepVar::Rho0 | SweepVar::K0 => "linear",
            SweepVar::My => "elements",
            SweepVar::D1 | SweepVar::CellSize | SweepVar::X => "m",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVar::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            let names: Vec<&str> = SweepVar::ALL.iter().map(|v| v.name()).collect();
            Error::field("var", format!("`{s}` is not one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Approx,
    Ub,
    Lb,
    Mc,
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "approx" => Ok(Output::Approx),
            "ub" => Ok(Output::Ub),
            "lb" => Ok(Output::Lb),
            "mc" => Ok(Output::Mc),
            other => Err(Error::field("outputs", format!("`{other}` is not one of approx, ub, lb, mc"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub values: Vec<f64>,
    pub outputs: Vec<Output>,
    pub trials: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub const ALL_OUTPUTS: [Output; 4] = [Output::Approx, Output::Ub, Output::Lb, Output::Mc];

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    pub fn without_mc(&self) -> Self {
        Self {
            outputs: self.outputs.iter().copied().filter(|o| *o != Output::Mc).collect(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::field("values", "must not be empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::field("values", format!("{v} is not finite")));
        }
        if self.outputs.is_empty() {
            return Err(Error::field("outputs", "must request at least one output"));
        }
        if self.wants(Output::Mc) && self.trials == 0 {
            return Err(Error::field("trials", "must be at least 1"));
        }
        Ok(())
    }
}

/// Parses `a,b,c` or an inclusive range `start:step:stop`.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let bad = |t: &str| Error::field("values", format!("`{t}` is not a number"));
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(t));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let (start, step, stop) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step == 0.0 || !step.is_finite() || (stop - start) * step < 0.0 {
            return Err(Error::field("values", format!("range `{text}` does not reach its end")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + i as f64 * step).collect());
    }
    text.split(',').filter(|t| !t.trim().is_empty()).map(parse).collect()
}

pub fn parse_outputs(text: &str) -> Result<Vec<Output>> {
    text.split(',').map(|t| t.trim().parse()).collect()
}

/// The scenario with `var` set to `value`.
pub fn apply(file: &ScenarioFile, var: SweepVar, value: f64) -> Result<ScenarioFile> {
    let mut f = file.clone();
    match var {
        SweepVar::P => f.budget.p_dbm = value,
        SweepVar::Rho => {
            f.channel.rho = Correlation::Value(value);
            for p in f.deployment.panels_mut() {
                p.rho = None;
            }
        }
        SweepVar::Rho0 => f.channel.rho0 = Correlation::Value(value),
        SweepVar::K0 => f.channel.k0 = KFactor::Linear(value),
        SweepVar::My => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(Error::field("My", format!("{value} is not a positive integer")));
            }
            for p in f.deployment.panels_mut() {
                p.my = value as usize;
            }
        }
        SweepVar::CellSize => {
            for p in f.deployment.panels_mut() {
                p.dx = value;
                p.dy = value;
            }
        }
        SweepVar::D1 => {
            if !(value > 0.0) {
                return Err(Error::field("d1", format!("{value} is not positive")));
            }
            let bs = f.bs;
            for p in f.deployment.panels_mut() {
                let c = p.center;
                let len = bs.distance(&c);
                if len == 0.0 {
                    return Err(Error::field("d1", "panel center coincides with the BS"));
                }
                let s = value / len;
                p.center = Point3::new(bs.x + s * (c.x - bs.x), bs.y + s * (c.y - bs.y), bs.z + s * (c.z - bs.z));
            }
        }
        SweepVar::X => match &mut f.deployment {
            Deployment::Centralized { panel } => panel.center.x = value,
            Deployment::Distributed { .. } => {
                return Err(Error::field("x", "only a centralized deployment can be moved as a whole"));
            }
        },
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub sweep_value: f64,
    pub ec_approx: Option<f64>,
    pub ec_ub: Option<f64>,
    pub ec_lb: Option<f64>,
    pub ec_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub gamma_teff: f64,
    pub mode: PropagationMode,
    pub d_boundary_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub var: SweepVar,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    pub mode: Option<ModeSetting>,
    pub workers: Option<usize>,
}

pub fn run_sweep(file: &ScenarioFile, spec: &SweepSpec, opts: &SweepOptions) -> Result<SweepResult> {
    spec.validate()?;
    let mc = spec.wants(Output::Mc).then_some(McOptions {
        trials: spec.trials,
        seed: spec.seed,
        workers: opts.workers,
    });
    let mut rows = Vec::with_capacity(spec.values.len());
    let mut flagged = Vec::new();

    // Envelopes do not depend on the transmit power.
    let mut shared = None;
    if spec.var == SweepVar::P {
        let resolved = file.resolve(opts.mode)?;
        let envelopes = match &mc {
            Some(m) => Some(sample_envelopes(&resolved.link, &m.trial_config())?),
            None => None,
        };
        shared = Some((resolved, envelopes));
    }

    for &value in &spec.values {
        let (link, warned, estimate) = match &shared {
            Some((resolved, envelopes)) => {
                let link = resolved.link.with_tx_power(dbm_to_watts(value));
                let estimate = match envelopes {
                    Some(env) => {
                        let g = link.effective_snr()?.gamma_teff;
                        Some(ec_from_envelopes(env, g, false)?)
                    }
                    None => None,
                };
                (link, resolved.warnings.first().cloned(), estimate)
            }
            None => {
                let resolved = apply(file, spec.var, value)?.resolve(opts.mode)?;
                let estimate: Option<McEstimate> = match &mc {
                    Some(m) => {
                        let g = resolved.link.effective_snr()?.gamma_teff;
                        let env = sample_envelopes(&resolved.link, &m.trial_config())?;
                        Some(ec_from_envelopes(&env, g, false)?)
                    }
                    None => None,
                };
                (resolved.link, resolved.warnings.first().cloned(), estimate)
            }
        };
        if let Some(w) = warned {
            flagged.push((value, w));
        }
        let report = link.analyze()?;
        rows.push(Row {
            sweep_value: value,
            ec_approx: spec.wants(Output::Approx).then_some(report.ec_approx),
            ec_ub: spec.wants(Output::Ub).then_some(report.ec_upper),
            ec_lb: spec.wants(Output::Lb).then_some(report.ec_lower),
            ec_mc: estimate.as_ref().map(|e| e.mean_ec),
            mc_stderr: estimate.as_ref().map(|e| e.std_error),
            gamma_teff: report.gamma_teff,
            mode: link.mode,
            d_boundary_m: link.panels.iter().map(|p| p.boundary).fold(0.0, f64::max),
        });
    }

    let warnings = match flagged.first() {
        None => Vec::new(),
        Some((_, first)) if spec.var == SweepVar::P => vec![first.clone()],
        Some((v, first)) => vec![format!(
            "{first} (at {} of {} sweep points, first {} = {v})",
            flagged.len(),
            spec.values.len(),
            spec.var
        )],
    };
    Ok(SweepResult {
        var: spec.var,
        rows,
        warnings,
    })
}
