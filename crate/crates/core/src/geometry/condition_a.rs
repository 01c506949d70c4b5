use crate::error::{BowtieError, Result};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

/// Intersections closer than this to the vertex count as the vertex itself.
const VERTEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionAResult {
    pub holds: bool,
    /// Centre and radius of the circle through both unit-gap vertices and `(0, p)`.
    pub center: Vec2,
    pub radius: f64,
    /// First offending point on a cone edge, if any.
    pub witness: Option<Vec2>,
    /// Edge index (0: upper right, 1: lower right, 2: upper left, 3: lower left)
    /// and ray parameter of the witness.
    pub witness_edge: Option<(usize, f64)>,
}

/// Does the circle through `(-1/2, 0)`, `(1/2, 0)` and `(0, p)` avoid the cone edges
/// except at the two vertices?
pub fn check_condition_a(alpha: f64, p: f64) -> Result<ConditionAResult> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(BowtieError::InvalidGeometry("alpha must lie in (0, pi)".into()));
    }
    if p == 0.0 || !p.is_finite() {
        return Err(BowtieError::InvalidConfig("emitter height p must be finite and non-zero".into()));
    }
    let k = (p * p - 0.25) / (2.0 * p);
    let center = Vec2::new(0.0, k);
    let radius = (k * k + 0.25).sqrt();
    let a = 0.5 * alpha;
    let rays = [
        (Vec2::new(0.5, 0.0), Vec2::new(a.cos(), a.sin())),
        (Vec2::new(0.5, 0.0), Vec2::new(a.cos(), -a.sin())),
        (Vec2::new(-0.5, 0.0), Vec2::new(-a.cos(), a.sin())),
        (Vec2::new(-0.5, 0.0), Vec2::new(-a.cos(), -a.sin())),
    ];
    for (idx, (s0, d)) in rays.iter().enumerate() {
        // |s0 + s d - c|^2 = radius^2 and s0 is on the circle: s (s + 2 (s0 - c).d) = 0
        let s = -2.0 * (*s0 - center).dot(*d);
        if s > VERTEX_TOL {
            return Ok(ConditionAResult {
                holds: false,
                center,
                radius,
                witness: Some(*s0 + *d * s),
                witness_edge: Some((idx, s)),
            });
        }
    }
    Ok(ConditionAResult { holds: true, center, radius, witness: None, witness_edge: None })
}
