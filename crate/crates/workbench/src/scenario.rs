//! On-disk scenario description (TOML) and its conversion into the model types.
//!
//! Powers and gains are written in dB and converted to linear units here and
//! nowhere else. Rician factors accept either a bare linear number or a table
//! `{ db = ... }`. Correlations accept a bare value or a Doppler triple
//! `{ fc_hz = ..., velocity_mps = ..., delay_s = ... }`.

use std::path::Path;

use riscap_core::channel::{CsiAging, RicianParams};
use riscap_core::geometry::{panel_link, Point3, RisPanel};
use riscap_core::link::{DirectSpec, PanelSpec, PropagationMode, ResolvedLink, Scenario};
use riscap_core::pathloss::LinkBudget;
use riscap_core::SPEED_OF_LIGHT;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSetting {
    #[default]
    Auto,
    Near,
    Far,
}

impl std::str::FromStr for ModeSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModeSetting::Auto),
            "near" => Ok(ModeSetting::Near),
            "far" => Ok(ModeSetting::Far),
            other => Err(Error::field("mode", format!("`{other}` is not one of auto, near, far"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KFactor {
    Linear(f64),
    Db { db: f64 },
}

impl KFactor {
    pub fn linear(&self) -> f64 {
        match *self {
            KFactor::Linear(k) => k,
            KFactor::Db { db } => 10f64.powf(db / 10.0),
        }
    }

    fn params(&self, field: &str) -> Result<RicianParams> {
        RicianParams::new(self.linear()).map_err(|e| Error::field(field, e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Correlation {
    Value(f64),
    Doppler {
        fc_hz: f64,
        velocity_mps: f64,
        delay_s: f64,
    },
}

impl Correlation {
    fn aging(&self, field: &str, clamp_negative: bool) -> Result<CsiAging> {
        let r = match *self {
            Correlation::Value(rho) => CsiAging::new(rho),
            Correlation::Doppler {
                fc_hz,
                velocity_mps,
                delay_s,
            } => CsiAging::from_doppler(fc_hz, velocity_mps, delay_s, clamp_negative),
        };
        r.map_err(|e| Error::field(field, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub p_dbm: f64,
    pub noise_dbm: f64,
    pub gt_db: f64,
    pub gr_db: f64,
    pub eta_db: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    /// Include the BS-user link.
    #[serde(default = "default_true")]
    pub direct: bool,
    /// Map a negative Doppler correlation to zero instead of rejecting it.
    #[serde(default)]
    pub clamp_negative_rho: bool,
    pub k0: KFactor,
    pub k1: KFactor,
    pub k2: KFactor,
    pub rho0: Correlation,
    /// Panel correlation unless a panel overrides it.
    pub rho: Correlation,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelEntry {
    pub mx: usize,
    pub my: usize,
    /// Element pitch (m).
    pub dx: f64,
    pub dy: f64,
    pub center: Point3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<KFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<KFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Correlation>,
}

impl PanelEntry {
    pub fn new(center: Point3, mx: usize, my: usize, cell: f64) -> Self {
        Self {
            mx,
            my,
            dx: cell,
            dy: cell,
            center,
            k1: None,
            k2: None,
            rho: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Deployment {
    Centralized { panel: PanelEntry },
    Distributed { panels: Vec<PanelEntry> },
}

impl Deployment {
    pub fn panels(&self) -> &[PanelEntry] {
        match self {
            Deployment::Centralized { panel } => std::slice::from_ref(panel),
            Deployment::Distributed { panels } => panels,
        }
    }

    pub fn panels_mut(&mut self) -> &mut [PanelEntry] {
        match self {
            Deployment::Centralized { panel } => std::slice::from_mut(panel),
            Deployment::Distributed { panels } => panels,
        }
    }

    fn field_path(&self, index: usize) -> String {
        match self {
            Deployment::Centralized { .. } => "deployment.panel".to_string(),
            Deployment::Distributed { .. } => format!("deployment.panels[{index}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    pub trials: usize,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub mode: ModeSetting,
    pub fc_hz: f64,
    pub bs: Point3,
    pub user: Point3,
    pub budget: Budget,
    pub channel: Channel,
    pub deployment: Deployment,
    #[serde(default)]
    pub monte_carlo: MonteCarlo,
}

/// A scenario resolved for one propagation formula, with any advisories.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub link: ResolvedLink,
    pub warnings: Vec<String>,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.fc_hz
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        if !(self.fc_hz > 0.0 && self.fc_hz.is_finite()) {
            return Err(Error::field("fc_hz", "must be positive and finite"));
        }
        if self.deployment.panels().is_empty() {
            return Err(Error::field("deployment.panels", "must list at least one panel"));
        }
        let b = &self.budget;
        let budget = LinkBudget {
            gt: db_to_linear(b.gt_db),
            gr: db_to_linear(b.gr_db),
            tx_power: dbm_to_watts(b.p_dbm),
            noise_power: dbm_to_watts(b.noise_dbm),
            eta_db: b.eta_db,
            xi: b.xi,
        };
        budget.validate().map_err(|e| Error::field("budget", e.to_string()))?;

        let ch = &self.channel;
        let clamp = ch.clamp_negative_rho;
        let mut panels = Vec::with_capacity(self.deployment.panels().len());
        for (i, p) in self.deployment.panels().iter().enumerate() {
            let path = self.deployment.field_path(i);
            let panel = RisPanel::new(p.center, p.mx, p.my, p.dx, p.dy).map_err(|e| Error::field(&path, e.to_string()))?;
            panels.push(PanelSpec {
                panel,
                k1: p.k1.unwrap_or(ch.k1).params(&format!("{path}.k1"))?,
                k2: p.k2.unwrap_or(ch.k2).params(&format!("{path}.k2"))?,
                aging: p.rho.unwrap_or(ch.rho).aging(&format!("{path}.rho"), clamp)?,
            });
        }
        let direct = if ch.direct {
            Some(DirectSpec {
                k0: ch.k0.params("channel.k0")?,
                aging: ch.rho0.aging("channel.rho0", clamp)?,
            })
        } else {
            None
        };
        Ok(Scenario {
            bs: self.bs,
            user: self.user,
            panels,
            direct,
            budget,
            wavelength: self.wavelength(),
        })
    }

    /// Resolves with the file's mode unless `mode` overrides it.
    pub fn resolve(&self, mode: Option<ModeSetting>) -> Result<Resolved> {
        let scenario = self.to_scenario()?;
        scenario.validate()?;
        let setting = mode.unwrap_or(self.mode);
        let chosen = match setting {
            ModeSetting::Auto => scenario.auto_mode()?,
            ModeSetting::Near => PropagationMode::Near,
            ModeSetting::Far => PropagationMode::Far,
        };
        let mut warnings = Vec::new();
        if setting == ModeSetting::Far {
            for (i, spec) in scenario.panels.iter().enumerate() {
                let d1 = panel_link(&scenario.bs, &scenario.user, &spec.panel)?.d1;
                let boundary = riscap_core::geometry::near_field_boundary(&spec.panel, scenario.wavelength);
                if d1 <= boundary {
                    warnings.push(format!(
                        "far-field formula forced for panel {i}: d1 = {d1} m is within the near-field boundary {boundary} m"
                    ));
                }
            }
        }
        Ok(Resolved {
            link: scenario.resolve(chosen)?,
            warnings,
        })
    }
}
