//! Element positions, link distances, elevation cosines and the near/far-field
//! boundary of planar surfaces parallel to the xy-plane.
//!
//! Elements are enumerated row-major over (y, x): the outer index walks the
//! rows along y, the inner index the columns along x. Element (i, j) with
//! column `i ∈ 0..mx` and row `j ∈ 0..my` sits at
//! `center + ((i + ½ − mx/2)·dx, (j + ½ − my/2)·dy, 0)`, which is the
//! half-integer offset grid `x ∈ [1 − mx/2, mx/2]`, `(x − ½)·dx`.
//!
//! The receive-side elevation cosine uses the receiver height:
//! `cos θ_r = (z_r − z_0) / r_r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// One reflecting surface: center, element counts and element dimensions (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RisPanel {
    pub center: Point3,
    pub mx: usize,
    pub my: usize,
    pub dx: f64,
    pub dy: f64,
}

impl RisPanel {
    pub fn new(center: Point3, mx: usize, my: usize, dx: f64, dy: f64) -> Result<Self> {
        let panel = Self {
            center,
            mx,
            my,
            dx,
            dy,
        };
        panel.validate()?;
        Ok(panel)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::param("center", "coordinates must be finite"));
        }
        if self.mx == 0 || self.my == 0 {
            return Err(Error::param("mx/my", "element counts must be at least 1"));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) || !(self.dy > 0.0 && self.dy.is_finite()) {
            return Err(Error::param("dx/dy", "element dimensions must be positive"));
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.mx * self.my
    }

    /// Physical diagonal `sqrt((mx·dx)² + (my·dy)²)`.
    pub fn diagonal(&self) -> f64 {
        let w = self.mx as f64 * self.dx;
        let h = self.my as f64 * self.dy;
        w.hypot(h)
    }
}

/// Per-element distances and elevation cosines for one BS → element → user path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementLink {
    /// BS to element (m).
    pub r_t: f64,
    /// Element to user (m).
    pub r_r: f64,
    /// Element to panel center (m).
    pub d_m: f64,
    /// Angle at the BS between the panel center and the element.
    pub cos_tx: f64,
    /// Angle at the user between the panel center and the element.
    pub cos_rx: f64,
    /// Elevation of the BS seen from the element.
    pub cos_t: f64,
    /// Elevation of the user seen from the element.
    pub cos_r: f64,
}

/// Panel-center distances and elevation cosines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelLink {
    pub d1: f64,
    pub d2: f64,
    pub cos_theta_t: f64,
    pub cos_theta_r: f64,
}

pub fn element_centers(panel: &RisPanel) -> Vec<Point3> {
    let c = panel.center;
    let x0 = 0.5 - panel.mx as f64 / 2.0;
    let y0 = 0.5 - panel.my as f64 / 2.0;
    let mut out = Vec::with_capacity(panel.element_count());
    for j in 0..panel.my {
        let oy = (y0 + j as f64) * panel.dy;
        for i in 0..panel.mx {
            let ox = (x0 + i as f64) * panel.dx;
            out.push(Point3::new(c.x + ox, c.y + oy, c.z));
        }
    }
    out
}

fn check_reflecting_side(bs: &Point3, user: &Point3, panel: &RisPanel) -> Result<()> {
    if !(bs.is_finite() && user.is_finite()) {
        return Err(Error::Geometry("endpoint coordinates must be finite".into()));
    }
    let z0 = panel.center.z;
    if bs.z <= z0 {
        return Err(Error::Geometry(format!(
            "BS height {} is not above the panel plane z = {z0}",
            bs.z
        )));
    }
    if user.z <= z0 {
        return Err(Error::Geometry(format!(
            "user height {} is not above the panel plane z = {z0}",
            user.z
        )));
    }
    Ok(())
}

pub fn panel_link(bs: &Point3, user: &Point3, panel: &RisPanel) -> Result<PanelLink> {
    check_reflecting_side(bs, user, panel)?;
    let c = panel.center;
    let d1 = bs.distance(&c);
    let d2 = user.distance(&c);
    Ok(PanelLink {
        d1,
        d2,
        cos_theta_t: (bs.z - c.z) / d1,
        cos_theta_r: (user.z - c.z) / d2,
    })
}

// Law of cosines at the endpoint, clamped against rounding just above 1.
fn endpoint_cosine(d_center: f64, r: f64, d_m: f64) -> f64 {
    ((d_center * d_center + r * r - d_m * d_m) / (2.0 * d_center * r)).min(1.0)
}

pub fn element_links(bs: &Point3, user: &Point3, panel: &RisPanel) -> Result<Vec<ElementLink>> {
    let center = panel_link(bs, user, panel)?;
    let c = panel.center;
    Ok(element_centers(panel)
        .into_iter()
        .map(|e| {
            let r_t = bs.distance(&e);
            let r_r = user.distance(&e);
            let d_m = e.distance(&c);
            ElementLink {
                r_t,
                r_r,
                d_m,
                cos_tx: endpoint_cosine(center.d1, r_t, d_m),
                cos_rx: endpoint_cosine(center.d2, r_r, d_m),
                cos_t: (bs.z - c.z) / r_t,
                cos_r: (user.z - c.z) / r_r,
            }
        })
        .collect())
}

/// `2·D²/λ` with `D` the panel diagonal.
pub fn near_field_boundary(panel: &RisPanel, wavelength: f64) -> f64 {
    let w = panel.mx as f64 * panel.dx;
    let h = panel.my as f64 * panel.dy;
    (w * w + h * h) * (2.0 / wavelength)
}
