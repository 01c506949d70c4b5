use super::BowtieConfig;
use crate::error::{BowtieError, Result};
use crate::vec2::Vec2;
use std::f64::consts::PI;

const ANGLE_TOL: f64 = 1e-12;

/// Polar coordinates about a vertex of the bow-tie.
///
/// About vertex 2 the angle runs counter-clockwise from the upper edge
/// (direction `alpha/2`) through the exterior to `2 pi - alpha` on the lower edge.
/// Vertex 1 uses the mirror image, so the angle runs clockwise from its upper edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerChart {
    pub vertex: Vec2,
    pub vertex_id: usize,
    pub alpha: f64,
}

impl CornerChart {
    /// Chart in the unit-gap variables, vertex at `(-1/2, 0)` or `(1/2, 0)`.
    pub fn scaled(vertex_id: usize, alpha: f64) -> Self {
        let x = if vertex_id == 1 { -0.5 } else { 0.5 };
        CornerChart { vertex: Vec2::new(x, 0.0), vertex_id, alpha }
    }

    /// Chart about the physical vertex of `config`.
    pub fn physical(vertex_id: usize, config: &BowtieConfig) -> Self {
        CornerChart { vertex: config.vertex(vertex_id), vertex_id, alpha: config.alpha }
    }

    pub fn opening(&self) -> f64 {
        2.0 * PI - self.alpha
    }

    pub fn beta(&self) -> f64 {
        PI / self.opening()
    }

    fn to_canonical(&self, w: Vec2) -> Vec2 {
        if self.vertex_id == 1 {
            w.mirror_x()
        } else {
            w
        }
    }

    /// `(r, theta)` of `y`; fails strictly inside the cone.
    pub fn polar(&self, y: Vec2) -> Result<(f64, f64)> {
        let w = self.to_canonical(y - self.vertex);
        let r = w.norm();
        if r == 0.0 {
            return Ok((0.0, 0.0));
        }
        let open = self.opening();
        let mut th = (w.angle() - 0.5 * self.alpha).rem_euclid(2.0 * PI);
        if th > open {
            if th >= 2.0 * PI - ANGLE_TOL {
                th = 0.0;
            } else if th <= open + ANGLE_TOL {
                th = open;
            } else {
                return Err(BowtieError::InsideInclusion { x: y.x, y: y.y });
            }
        }
        Ok((r, th))
    }

    pub fn point(&self, r: f64, theta: f64) -> Vec2 {
        self.vertex + self.to_canonical(Vec2::from_angle(theta + 0.5 * self.alpha) * r)
    }

    /// Unit vectors `(e_r, e_theta)` at angle `theta`.
    pub fn frame(&self, theta: f64) -> (Vec2, Vec2) {
        let er = Vec2::from_angle(theta + 0.5 * self.alpha);
        (self.to_canonical(er), self.to_canonical(er.perp()))
    }

    /// Unit vector along the bisector of the exterior angle.
    pub fn bisector(&self) -> Vec2 {
        self.frame(0.5 * self.opening()).0
    }
}

/// Membership in the unbounded unit-gap cones.
pub fn scaled_cone_contains(y: Vec2, alpha: f64) -> bool {
    let t = (0.5 * alpha).tan();
    let x = y.x.abs();
    x > 0.5 && y.y.abs() < t * (x - 0.5)
}

/// Whether `eps*y` is inside the physical inclusions exactly when `y` is inside the
/// scaled cones. Only meaningful where the inclusions are exact cones, `|eps*y| < mu`.
pub fn scale_relation_check(config: &BowtieConfig, y: Vec2) -> Result<bool> {
    let x = y * config.epsilon;
    if x.norm() >= config.mu {
        return Err(BowtieError::InvalidConfig("scaled point lies outside the ball of radius mu".into()));
    }
    let mut cfg = config.clone();
    cfg.layout = super::Layout::Pair;
    Ok(cfg.contains(x) == scaled_cone_contains(y, config.alpha))
}
