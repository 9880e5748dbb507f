//! A full experiment description and its resolution into the per-panel weight
//! vectors consumed by the moment kernels and the Monte Carlo oracle.

use serde::{Deserialize, Serialize};

use crate::capacity::CapacityReport;
use crate::channel::{CsiAging, RicianParams};
use crate::error::{Error, Result};
use crate::geometry::{near_field_boundary, panel_link, Point3, RisPanel};
use crate::moments::{
    distributed_moments, distributed_noise_variance, saturated_snr, DirectWeights, EffectiveSnr,
    MomentSummary, PanelWeights,
};
use crate::pathloss::{LinkBudget, PanelPathLoss};

/// One surface with its channel statistics. `k1` is the BS-panel hop, `k2`
/// the panel-user hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelSpec {
    pub panel: RisPanel,
    pub k1: RicianParams,
    pub k2: RicianParams,
    pub aging: CsiAging,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSpec {
    pub k0: RicianParams,
    pub aging: CsiAging,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagationMode {
    /// Per-element path loss.
    Near,
    /// One path loss per panel, evaluated at the panel center.
    Far,
}

impl PropagationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PropagationMode::Near => "near",
            PropagationMode::Far => "far",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub bs: Point3,
    pub user: Point3,
    pub panels: Vec<PanelSpec>,
    pub direct: Option<DirectSpec>,
    pub budget: LinkBudget,
    /// Carrier wavelength (m).
    pub wavelength: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.bs.is_finite() && self.user.is_finite()) {
            return Err(Error::param("bs/user", "coordinates must be finite"));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::param("wavelength", "must be positive"));
        }
        if self.panels.is_empty() && self.direct.is_none() {
            return Err(Error::InvalidScenario("no reflecting panel and no direct link".into()));
        }
        self.budget.validate()?;
        for p in &self.panels {
            p.panel.validate()?;
            RicianParams::new(p.k1.k)?;
            RicianParams::new(p.k2.k)?;
            CsiAging::new(p.aging.rho)?;
        }
        if let Some(d) = &self.direct {
            RicianParams::new(d.k0.k)?;
            CsiAging::new(d.aging.rho)?;
        }
        Ok(())
    }

    pub fn boundaries(&self) -> Vec<f64> {
        self.panels
            .iter()
            .map(|p| near_field_boundary(&p.panel, self.wavelength))
            .collect()
    }

    /// Far field only when every panel's BS distance strictly exceeds its boundary.
    pub fn auto_mode(&self) -> Result<PropagationMode> {
        for p in &self.panels {
            let d1 = panel_link(&self.bs, &self.user, &p.panel)?.d1;
            if d1 <= near_field_boundary(&p.panel, self.wavelength) {
                return Ok(PropagationMode::Near);
            }
        }
        Ok(PropagationMode::Far)
    }

    pub fn resolve(&self, mode: PropagationMode) -> Result<ResolvedLink> {
        self.validate()?;
        let mut panels = Vec::with_capacity(self.panels.len());
        for spec in &self.panels {
            let loss = PanelPathLoss::compute(&self.bs, &self.user, &spec.panel, self.budget.gt, self.budget.gr)?;
            let geometry = panel_link(&self.bs, &self.user, &spec.panel)?;
            let beta_inv = match mode {
                PropagationMode::Near => loss.per_element.iter().map(|b| 1.0 / b).collect(),
                PropagationMode::Far => vec![1.0 / loss.farfield; spec.panel.element_count()],
            };
            panels.push(ResolvedPanel {
                beta_inv,
                k1: spec.k1,
                k2: spec.k2,
                rho: spec.aging.rho,
                d1: geometry.d1,
                boundary: near_field_boundary(&spec.panel, self.wavelength),
            });
        }
        let direct = match &self.direct {
            Some(d) => {
                let beta = crate::pathloss::direct_pathloss(
                    self.bs.distance(&self.user),
                    self.budget.eta_db,
                    self.budget.xi,
                )?;
                Some(ResolvedDirect {
                    beta_inv: 1.0 / beta,
                    k0: d.k0,
                    rho: d.aging.rho,
                })
            }
            None => None,
        };
        Ok(ResolvedLink {
            panels,
            direct,
            tx_power: self.budget.tx_power,
            noise_power: self.budget.noise_power,
            mode,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedPanel {
    pub beta_inv: Vec<f64>,
    pub k1: RicianParams,
    pub k2: RicianParams,
    pub rho: f64,
    pub d1: f64,
    pub boundary: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedDirect {
    pub beta_inv: f64,
    pub k0: RicianParams,
    pub rho: f64,
}

/// Weight vectors and statistics of every path, ready for analysis or sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedLink {
    pub panels: Vec<ResolvedPanel>,
    pub direct: Option<ResolvedDirect>,
    pub tx_power: f64,
    pub noise_power: f64,
    pub mode: PropagationMode,
}

impl ResolvedLink {
    pub fn panel_weights(&self) -> Vec<PanelWeights<'_>> {
        self.panels
            .iter()
            .map(|p| PanelWeights {
                beta_inv: &p.beta_inv,
                omega1: p.k1.mean_envelope(),
                omega2: p.k2.mean_envelope(),
                rho: p.rho,
            })
            .collect()
    }

    pub fn direct_weights(&self) -> DirectWeights {
        self.direct
            .map(|d| DirectWeights {
                beta_inv: d.beta_inv,
                omega0: d.k0.mean_envelope(),
                rho: d.rho,
            })
            .unwrap_or_default()
    }

    pub fn element_count(&self) -> usize {
        self.panels.iter().map(|p| p.beta_inv.len()).sum()
    }

    pub fn moments(&self) -> MomentSummary {
        distributed_moments(&self.panel_weights(), &self.direct_weights())
    }

    pub fn effective_snr(&self) -> Result<EffectiveSnr> {
        distributed_noise_variance(self.tx_power, &self.panel_weights(), &self.direct_weights(), self.noise_power)
    }

    /// Limit of the effective SNR as the transmit power grows without bound.
    pub fn saturated_snr(&self) -> f64 {
        saturated_snr(&self.panel_weights(), &self.direct_weights())
    }

    pub fn with_tx_power(&self, tx_power: f64) -> Self {
        Self {
            tx_power,
            ..self.clone()
        }
    }

    pub fn analyze(&self) -> Result<CapacityReport> {
        let snr = self.effective_snr()?;
        CapacityReport::from_moments(&self.moments(), snr.gamma_teff)
    }
}
