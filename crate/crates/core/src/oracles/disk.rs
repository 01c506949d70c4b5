//! Exact exterior solution for a dipole next to a perfectly conducting disk.
//!
//! The disk floats at a constant potential with zero net flux and the field decays
//! like `1/|X|`. Inverting the source in the circle gives an image dipole
//! `b = (R/|d|)^2 (a - 2 (a.d^) d^)` at `c + R^2 d / |d|^2`, entering with a minus sign.
//! The same solution is also available as a circular-harmonics series, which is
//! used to check the image construction.

use crate::error::{BowtieError, Result};
use crate::vec2::Vec2;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskProblem {
    pub center: Vec2,
    pub radius: f64,
    /// Unit dipole direction.
    pub direction: Vec2,
    pub location: Vec2,
}

fn dipole_field(a: Vec2, p: Vec2, x: Vec2) -> (f64, Vec2) {
    let d = x - p;
    let r2 = d.norm_sq();
    let u = a.dot(d) / (2.0 * PI * r2);
    let g = (a * r2 - d * (2.0 * a.dot(d))) * (1.0 / (2.0 * PI * r2 * r2));
    (u, g)
}

impl DiskProblem {
    pub fn new(center: Vec2, radius: f64, direction: Vec2, location: Vec2) -> Result<Self> {
        if location.dist(center) <= radius {
            return Err(BowtieError::InvalidConfig("emitter must lie outside the closed disk".into()));
        }
        Ok(DiskProblem { center, radius, direction: direction.normalized(), location })
    }

    fn check(&self, x: Vec2) -> Result<()> {
        if x.dist(self.center) < self.radius {
            return Err(BowtieError::InsideInclusion { x: x.x, y: x.y });
        }
        if x == self.location {
            return Err(BowtieError::SingularPoint("evaluation at the emitter".into()));
        }
        Ok(())
    }

    /// Image position and strength.
    pub fn image(&self) -> (Vec2, Vec2) {
        let d = self.location - self.center;
        let s = self.radius * self.radius / d.norm_sq();
        let dh = d.normalized();
        let a = self.direction;
        (self.center + d * s, (a - dh * (2.0 * a.dot(dh))) * s)
    }

    /// Potential of the disk.
    pub fn boundary_constant(&self) -> f64 {
        let d = self.location - self.center;
        -self.direction.dot(d) / (2.0 * PI * d.norm_sq())
    }

    /// Exact `(u, grad u)` from the image system.
    pub fn image_solution(&self, x: Vec2) -> Result<(f64, Vec2)> {
        self.check(x)?;
        let (zs, b) = self.image();
        let (u0, g0) = dipole_field(self.direction, self.location, x);
        let (u1, g1) = dipole_field(b, zs, x);
        Ok((u0 - u1, g0 - g1))
    }

    /// `(u, grad u)` from the first `terms` circular harmonics of the reflected field.
    pub fn series_solution(&self, x: Vec2, terms: usize) -> Result<(f64, Vec2)> {
        self.check(x)?;
        let (u0, g0) = dipole_field(self.direction, self.location, x);
        let r2 = self.radius * self.radius;
        let at = Complex64::new(self.direction.x, -self.direction.y);
        let zeta = self.location - self.center;
        let zc = Complex64::new(zeta.x, -zeta.y);
        let w = Complex64::new(x.x - self.center.x, x.y - self.center.y);
        let winv = 1.0 / w;
        // C_m = conj(a) R^{2m} / conj(zeta)^{m+1}; G = sum C_m w^{-m} / 2 pi
        let mut cm = at / zc;
        let mut wp = Complex64::new(1.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        for m in 1..=terms {
            cm *= r2 / zc;
            wp *= winv;
            let term = cm * wp;
            g += term;
            dg -= term * winv * m as f64;
            if term.norm() < 1e-300 {
                break;
            }
        }
        g /= 2.0 * PI;
        dg /= 2.0 * PI;
        Ok((u0 + g.re, g0 + Vec2::new(dg.re, -dg.im)))
    }

    /// Exact solution for a uniform field `e` at infinity with the same disk:
    /// `u = e.w (1 - R^2/|w|^2)` plus the boundary constant.
    pub fn linear_solution(&self, e: Vec2, x: Vec2) -> (f64, Vec2) {
        let w = x - self.center;
        let r2 = w.norm_sq();
        let rr = self.radius * self.radius;
        let ew = e.dot(w);
        let u = ew * (1.0 - rr / r2);
        let g = e * (1.0 - rr / r2) + w * (2.0 * rr * ew / (r2 * r2));
        (u, g)
    }
}

/// Incident field at the disk centre produced by the dipole.
pub fn incident_field_at_center(p: &DiskProblem) -> Vec2 {
    dipole_field(p.direction, p.location, p.center).1
}
