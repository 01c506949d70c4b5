//! Exterior harmonic functions built from point charges inside the inclusions.

use crate::bie::ProblemKind;
use crate::error::{BowtieError, Result};
use crate::geometry::PanelMesh;
use crate::vec2::Vec2;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedSolution {
    pub charges: Vec<(Vec2, f64)>,
}

impl ManufacturedSolution {
    /// Charges must sit strictly inside the inclusions and sum to zero so that the
    /// field decays at infinity.
    pub fn new(mesh: &PanelMesh, charges: Vec<(Vec2, f64)>) -> Result<Self> {
        for (p, _) in &charges {
            if !mesh.contains(*p) {
                return Err(BowtieError::InvalidConfig(format!("charge at ({}, {}) is outside the inclusions", p.x, p.y)));
            }
        }
        let total: f64 = charges.iter().map(|c| c.1).sum();
        let scale: f64 = charges.iter().map(|c| c.1.abs()).sum::<f64>().max(1.0);
        if total.abs() > 1e-14 * scale {
            return Err(BowtieError::InvalidConfig("charges must sum to zero".into()));
        }
        Ok(ManufacturedSolution { charges })
    }

    pub fn potential(&self, x: Vec2) -> f64 {
        self.charges.iter().map(|(p, c)| c * (x - *p).norm().ln() / (2.0 * PI)).sum()
    }

    pub fn gradient(&self, x: Vec2) -> Vec2 {
        let mut g = Vec2::ZERO;
        for (p, c) in &self.charges {
            let d = x - *p;
            g += d * (c / (2.0 * PI * d.norm_sq()));
        }
        g
    }

    /// Problem whose solution outside the inclusions is this function.
    pub fn problem(&self) -> ProblemKind {
        ProblemKind::PointCharges { charges: self.charges.clone() }
    }
}
