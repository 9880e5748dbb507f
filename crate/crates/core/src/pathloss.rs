//! Path-loss factors. Every value here is a loss: received power scales as `1/β`.
//!
//! The reflecting-surface reference constant and the direct-link loss are kept
//! apart as [`beta0_reference`] and [`direct_pathloss`]. Gains are linear.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{element_links, panel_link, ElementLink, PanelLink, Point3, RisPanel};

/// Antenna gains, powers and the direct-link loss model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// BS antenna gain (linear).
    pub gt: f64,
    /// User antenna gain (linear).
    pub gr: f64,
    /// Transmit power (W).
    pub tx_power: f64,
    /// AWGN power (W).
    pub noise_power: f64,
    /// Direct-link loss at 1 m, as a gain in dB (negative).
    pub eta_db: f64,
    /// Direct-link path-loss exponent.
    pub xi: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.gt) {
            return Err(Error::param("gt", "gain must be positive"));
        }
        if !positive(self.gr) {
            return Err(Error::param("gr", "gain must be positive"));
        }
        if !positive(self.tx_power) {
            return Err(Error::param("tx_power", "power must be positive"));
        }
        if !positive(self.noise_power) {
            return Err(Error::param("noise_power", "power must be positive"));
        }
        if !positive(self.xi) {
            return Err(Error::param("xi", "exponent must be positive"));
        }
        if !self.eta_db.is_finite() {
            return Err(Error::param("eta_db", "must be finite"));
        }
        Ok(())
    }
}

/// `16π² / (Gt·Gr·dx²·dy²)`.
pub fn beta0_reference(gt: f64, gr: f64, dx: f64, dy: f64) -> f64 {
    16.0 * PI * PI / (gt * gr * dx * dx * dy * dy)
}

/// Joint normalized radiation pattern `cos_tx^(Gt/2−1)·cos_t·cos_r·cos_rx^(Gr/2−1)`.
pub fn combine_pattern(link: &ElementLink, gt: f64, gr: f64) -> f64 {
    link.cos_tx.powf(gt / 2.0 - 1.0) * link.cos_t * link.cos_r * link.cos_rx.powf(gr / 2.0 - 1.0)
}

/// `β0_ref·(r_t·r_r)² / F`; `element` only labels the error.
pub fn element_pathloss(
    link: &ElementLink,
    element: usize,
    beta0_ref: f64,
    gt: f64,
    gr: f64,
) -> Result<f64> {
    let f = combine_pattern(link, gt, gr);
    if !(f > 0.0) {
        return Err(Error::SingularPattern { element, value: f });
    }
    let rr = link.r_t * link.r_r;
    Ok(beta0_ref * rr * rr / f)
}

/// `β0_ref·(d1·d2)² / (cos θ_t·cos θ_r)`.
pub fn farfield_pathloss(link: &PanelLink, beta0_ref: f64) -> Result<f64> {
    let f = link.cos_theta_t * link.cos_theta_r;
    if !(f > 0.0) {
        return Err(Error::SingularPattern { element: 0, value: f });
    }
    let dd = link.d1 * link.d2;
    Ok(beta0_ref * dd * dd / f)
}

/// Direct BS-user loss factor; its inverse in dB is `eta_db − 10·xi·log10(d0)`.
pub fn direct_pathloss(d0: f64, eta_db: f64, xi: f64) -> Result<f64> {
    if !(d0 > 0.0 && d0.is_finite()) {
        return Err(Error::param("d0", "BS-user distance must be positive"));
    }
    let gain_db = eta_db - 10.0 * xi * d0.log10();
    Ok(10f64.powf(-gain_db / 10.0))
}

/// Loss factors of one panel.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelPathLoss {
    pub beta0_ref: f64,
    pub per_element: Vec<f64>,
    pub farfield: f64,
}

impl PanelPathLoss {
    pub fn compute(bs: &Point3, user: &Point3, panel: &RisPanel, gt: f64, gr: f64) -> Result<Self> {
        panel.validate()?;
        let beta0_ref = beta0_reference(gt, gr, panel.dx, panel.dy);
        let per_element = element_links(bs, user, panel)?
            .iter()
            .enumerate()
            .map(|(m, l)| element_pathloss(l, m, beta0_ref, gt, gr))
            .collect::<Result<Vec<_>>>()?;
        let farfield = farfield_pathloss(&panel_link(bs, user, panel)?, beta0_ref)?;
        Ok(Self {
            beta0_ref,
            per_element,
            farfield,
        })
    }
}

/// Loss factors of every panel plus the direct link.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLossSet {
    pub panels: Vec<PanelPathLoss>,
    pub direct: f64,
}

impl PathLossSet {
    pub fn compute(bs: &Point3, user: &Point3, panels: &[RisPanel], budget: &LinkBudget) -> Result<Self> {
        budget.validate()?;
        let panels = panels
            .iter()
            .map(|p| PanelPathLoss::compute(bs, user, p, budget.gt, budget.gr))
            .collect::<Result<Vec<_>>>()?;
        let direct = direct_pathloss(bs.distance(user), budget.eta_db, budget.xi)?;
        Ok(Self { panels, direct })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const D: f64 = 0.0075;

    fn bs() -> Point3 {
        Point3::new(-50.0, 0.0, 10.0)
    }

    fn user() -> Point3 {
        Point3::new(50.0, 0.0, 10.0)
    }

    fn unit_link() -> ElementLink {
        ElementLink {
            r_t: 2.0,
            r_r: 3.0,
            d_m: 0.0,
            cos_tx: 1.0,
            cos_rx: 1.0,
            cos_t: 1.0,
            cos_r: 1.0,
        }
    }

    #[test]
    fn reference_constant() {
        assert_relative_eq!(beta0_reference(1.0, 1.0, 1.0, 1.0), 16.0 * PI * PI);
        let a = beta0_reference(3.0, 2.0, 0.1, 0.2);
        assert_relative_eq!(beta0_reference(3.0, 2.0, 0.2, 0.2), a / 4.0, max_relative = 1e-15);
        assert_relative_eq!(beta0_reference(100.0, 1.0, D, D), 499085180.578543369169704631302, max_relative = 1e-14);
    }

    #[test]
    fn pattern_trivial_cases() {
        assert_eq!(combine_pattern(&unit_link(), 100.0, 1.0), 1.0);
        let l = ElementLink {
            cos_tx: 0.3,
            cos_rx: 0.4,
            cos_t: 0.5,
            cos_r: 0.6,
            ..unit_link()
        };
        assert_relative_eq!(combine_pattern(&l, 2.0, 2.0), 0.3, max_relative = 1e-15);
    }

    #[test]
    fn corner_element_of_table_one_panel() {
        let p = RisPanel::new(Point3::new(-49.5, 0.0, 9.5), 24, 24, D, D).unwrap();
        let links = element_links(&bs(), &user(), &p).unwrap();
        let b0 = beta0_reference(100.0, 1.0, D, D);
        assert_relative_eq!(combine_pattern(&links[0], 100.0, 1.0), 0.00200921160462391048, max_relative = 1e-10);
        assert_relative_eq!(
            element_pathloss(&links[0], 0, b0, 100.0, 1.0).unwrap(),
            1055941095892443.03767703701189,
            max_relative = 1e-10
        );
    }

    #[test]
    fn center_element_matches_farfield_for_isotropic_exponents() {
        let p = RisPanel::new(Point3::new(-49.5, 0.0, 9.5), 1, 1, D, D).unwrap();
        let b0 = beta0_reference(2.0, 2.0, D, D);
        let el = element_links(&bs(), &user(), &p).unwrap()[0];
        let ff = farfield_pathloss(&panel_link(&bs(), &user(), &p).unwrap(), b0).unwrap();
        assert_relative_eq!(element_pathloss(&el, 0, b0, 2.0, 2.0).unwrap(), ff, max_relative = 1e-14);
    }

    #[test]
    fn distance_scaling() {
        let l = unit_link();
        let doubled = ElementLink {
            r_t: 4.0,
            r_r: 6.0,
            ..l
        };
        let a = element_pathloss(&l, 0, 1.0, 100.0, 1.0).unwrap();
        let b = element_pathloss(&doubled, 0, 1.0, 100.0, 1.0).unwrap();
        assert_relative_eq!(b, 16.0 * a, max_relative = 1e-15);
        let pl = PanelLink {
            d1: 1.0,
            d2: 2.0,
            cos_theta_t: 0.5,
            cos_theta_r: 0.5,
        };
        let far = PanelLink { d2: 4.0, ..pl };
        assert_relative_eq!(
            farfield_pathloss(&far, 1.0).unwrap(),
            4.0 * farfield_pathloss(&pl, 1.0).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn farfield_at_midpoint_panel() {
        let p = RisPanel::new(Point3::new(0.0, 0.0, 9.5), 24, 24, D, D).unwrap();
        let b0 = beta0_reference(100.0, 1.0, D, D);
        let ff = farfield_pathloss(&panel_link(&bs(), &user(), &p).unwrap(), b0).unwrap();
        assert_relative_eq!(ff, 31202182569110714669.833447572, max_relative = 1e-13);
    }

    #[test]
    fn singular_pattern_is_reported() {
        let l = ElementLink {
            cos_t: 0.0,
            ..unit_link()
        };
        assert!(matches!(
            element_pathloss(&l, 7, 1.0, 2.0, 2.0),
            Err(Error::SingularPattern { element: 7, .. })
        ));
        let pl = PanelLink {
            d1: 1.0,
            d2: 1.0,
            cos_theta_t: 0.0,
            cos_theta_r: 1.0,
        };
        assert!(farfield_pathloss(&pl, 1.0).is_err());
    }

    #[test]
    fn direct_link_model() {
        assert_relative_eq!(direct_pathloss(1.0, -30.0, 3.5).unwrap(), 1e3, max_relative = 1e-14);
        assert_relative_eq!(direct_pathloss(100.0, -30.0, 3.5).unwrap(), 1e10, max_relative = 1e-13);
        assert_eq!(bs().distance(&user()), 100.0);
        assert!(direct_pathloss(0.0, -30.0, 3.5).is_err());
    }

    #[test]
    fn edge_element_of_large_panel_loses_more_than_center() {
        let p = RisPanel::new(Point3::new(-47.0, 0.0, 9.5), 40, 40, D, D).unwrap();
        let set = PanelPathLoss::compute(&bs(), &user(), &p, 100.0, 1.0).unwrap();
        let center = set.per_element[20 * 40 + 20];
        assert!(set.per_element[1599] / center > 1.0);
        assert!(set.per_element[39] / center > 1.0);
        assert_eq!(set.per_element.len(), 1600);
    }

    #[test]
    fn elementwise_losses_approach_farfield() {
        let mut worst = Vec::new();
        for k in 0..6 {
            let dist = 3.0 * 2f64.powi(k);
            let p = RisPanel::new(Point3::new(0.0, 0.0, 0.0), 16, 16, D, D).unwrap();
            let b = Point3::new(-dist, 0.0, dist);
            let u = Point3::new(dist, 0.0, dist);
            let set = PanelPathLoss::compute(&b, &u, &p, 100.0, 1.0).unwrap();
            worst.push(set.per_element.iter().map(|x| (x / set.farfield - 1.0).abs()).fold(0.0, f64::max));
        }
        assert!(worst.windows(2).all(|w| w[1] < w[0]));
        assert!(*worst.last().unwrap() < 0.01);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reference_times_area_squared_is_invariant(
                gt in 0.5f64..200.0, gr in 0.5f64..10.0,
                dx in 1e-3f64..1.0, dy in 1e-3f64..1.0,
            ) {
                let v = beta0_reference(gt, gr, dx, dy) * dx * dx * dy * dy;
                prop_assert!((v - 16.0 * PI * PI / (gt * gr)).abs() <= 1e-12 * v);
            }

            #[test]
            fn losses_positive_and_monotone_in_distance(
                r_t in 0.1f64..100.0, r_r in 0.1f64..100.0,
                c1 in 0.05f64..1.0, c2 in 0.05f64..1.0, c3 in 0.05f64..1.0, c4 in 0.05f64..1.0,
                gt in 1.0f64..200.0, gr in 1.0f64..10.0, s in 1.0001f64..4.0,
            ) {
                let l = ElementLink { r_t, r_r, d_m: 0.0, cos_tx: c1, cos_rx: c2, cos_t: c3, cos_r: c4 };
                let a = element_pathloss(&l, 0, 1.0, gt, gr).unwrap();
                let b = element_pathloss(&ElementLink { r_t: r_t * s, ..l }, 0, 1.0, gt, gr).unwrap();
                let c = element_pathloss(&ElementLink { r_r: r_r * s, ..l }, 0, 1.0, gt, gr).unwrap();
                prop_assert!(a > 0.0 && b > a && c > a);
                let d0 = r_t + r_r;
                prop_assert!(direct_pathloss(d0 * s, -30.0, 3.5).unwrap() > direct_pathloss(d0, -30.0, 3.5).unwrap());
            }
        }
    }
}
