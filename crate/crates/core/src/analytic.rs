//! Closed-form potentials: Newton kernel, dipole fields, corner singular
//! functions, the angle function about `Q`, level circles of `d2 N` and the
//! extremal boundary points of `d2 N_{eps e}` on the cone edges.

use crate::error::{BowtieError, Result};
use crate::geometry::{BowtieConfig, CornerChart};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const INV_2PI: f64 = 0.5 / PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub beta: f64,
    pub gamma: f64,
}

impl Exponents {
    pub fn new(alpha: f64) -> Self {
        Exponents { beta: PI / (2.0 * PI - alpha), gamma: PI / (PI - alpha) }
    }
}

/// Dipole of unit strength with direction `direction` at `location`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleSpec {
    pub direction: Vec2,
    pub location: Vec2,
}

impl DipoleSpec {
    /// Emitter at `eps * (0, p)`.
    pub fn emitter(direction: Vec2, p: f64, epsilon: f64) -> Self {
        DipoleSpec { direction: direction.normalized(), location: Vec2::new(0.0, epsilon * p) }
    }

    pub fn at(direction: Vec2, location: Vec2) -> Self {
        DipoleSpec { direction: direction.normalized(), location }
    }

    /// `a . grad N_{location}(x)`.
    pub fn potential(&self, x: Vec2) -> Result<f64> {
        dipole_potential(x, self)
    }

    pub fn gradient(&self, x: Vec2) -> Result<Vec2> {
        dipole_gradient(x, self)
    }
}

fn check_distinct(x: Vec2, p: Vec2) -> Result<Vec2> {
    let d = x - p;
    if d.norm_sq() == 0.0 {
        return Err(BowtieError::SingularPoint(format!("evaluation at the source ({}, {})", p.x, p.y)));
    }
    Ok(d)
}

/// `(1/2pi) log|x - p0|`.
pub fn newton_potential(x: Vec2, p0: Vec2) -> Result<f64> {
    let d = check_distinct(x, p0)?;
    Ok(INV_2PI * d.norm().ln())
}

/// `grad_x N(x - p0) = (x - p0) / (2 pi |x - p0|^2)`.
pub fn newton_gradient(x: Vec2, p0: Vec2) -> Result<Vec2> {
    let d = check_distinct(x, p0)?;
    Ok(d * (INV_2PI / d.norm_sq()))
}

pub fn dipole_potential(x: Vec2, spec: &DipoleSpec) -> Result<f64> {
    let d = check_distinct(x, spec.location)?;
    Ok(INV_2PI * spec.direction.dot(d) / d.norm_sq())
}

/// Hessian of `N` applied to `a`: `(a |d|^2 - 2 (a.d) d) / (2 pi |d|^4)`.
pub fn dipole_gradient(x: Vec2, spec: &DipoleSpec) -> Result<Vec2> {
    let d = check_distinct(x, spec.location)?;
    let r2 = d.norm_sq();
    let a = spec.direction;
    Ok((a * r2 - d * (2.0 * a.dot(d))) * (INV_2PI / (r2 * r2)))
}

/// Second derivatives of `a . grad N`, as `[dxx, dxy, dyy]`.
pub fn dipole_hessian(x: Vec2, spec: &DipoleSpec) -> Result<[f64; 3]> {
    let d = check_distinct(x, spec.location)?;
    let (dx, dy) = (d.x, d.y);
    let r2 = d.norm_sq();
    let (ax, ay) = (spec.direction.x, spec.direction.y);
    let ad = ax * dx + ay * dy;
    let c = INV_2PI / (r2 * r2 * r2);
    // gradient components g_i = (a_i r^2 - 2 ad d_i) / r^4
    let gxx = (2.0 * ax * dx - 2.0 * ax * dx - 2.0 * ad) * r2 - 4.0 * dx * (ax * r2 - 2.0 * ad * dx);
    let gxy = (2.0 * ax * dy - 2.0 * ay * dx) * r2 - 4.0 * dy * (ax * r2 - 2.0 * ad * dx);
    let gyy = (2.0 * ay * dy - 2.0 * ay * dy - 2.0 * ad) * r2 - 4.0 * dy * (ay * r2 - 2.0 * ad * dy);
    Ok([gxx * c, gxy * c, gyy * c])
}

/// `r^beta sin(beta theta)` about vertex `chart`.
pub fn corner_singular_b(y: Vec2, chart: &CornerChart) -> Result<f64> {
    let (r, th) = chart.polar(y)?;
    let b = chart.beta();
    Ok(r.powf(b) * (b * th).sin())
}

pub fn grad_corner_singular_b(y: Vec2, chart: &CornerChart) -> Result<Vec2> {
    let (r, th) = chart.polar(y)?;
    if r == 0.0 {
        return Err(BowtieError::SingularPoint("gradient of B at the vertex".into()));
    }
    let b = chart.beta();
    let (er, et) = chart.frame(th);
    let m = b * r.powf(b - 1.0);
    Ok((er * (b * th).sin() + et * (b * th).cos()) * m)
}

/// Unit-gap chart helper matching the configuration's opening angle.
pub fn scaled_chart(vertex_id: usize, config: &BowtieConfig) -> CornerChart {
    CornerChart::scaled(vertex_id, config.alpha)
}

/// Point where both upper cone edges meet when extended below the x1 axis.
pub fn angle_centre(alpha: f64) -> Vec2 {
    Vec2::new(0.0, -0.5 * (0.5 * alpha).tan())
}

fn check_phi_domain(y: Vec2, alpha: f64) -> Result<()> {
    if crate::geometry::scaled_cone_contains(y, alpha) {
        return Err(BowtieError::InsideInclusion { x: y.x, y: y.y });
    }
    Ok(())
}

/// Angle at `Q` between the upper edge of the left cone and `y`, measured clockwise,
/// extended evenly in `y2`. Zero on the left cone, `pi - alpha` on the right cone.
pub fn angle_phi(y: Vec2, alpha: f64) -> Result<f64> {
    check_phi_domain(y, alpha)?;
    let q = angle_centre(alpha);
    let w = Vec2::new(y.x, y.y.abs()) - q;
    if w.norm_sq() == 0.0 {
        return Err(BowtieError::SingularPoint("angle function at Q".into()));
    }
    let a = 0.5 * alpha;
    let u = Vec2::new(-a.cos(), a.sin());
    let phi = (-u.cross(w)).atan2(u.dot(w));
    let hi = PI - alpha;
    if phi < -1e-12 || phi > hi + 1e-12 {
        return Err(BowtieError::InsideInclusion { x: y.x, y: y.y });
    }
    Ok(phi.clamp(0.0, hi))
}

pub fn grad_angle_phi(y: Vec2, alpha: f64) -> Result<Vec2> {
    angle_phi(y, alpha)?;
    let q = angle_centre(alpha);
    let w = Vec2::new(y.x, y.y.abs()) - q;
    let r2 = w.norm_sq();
    let g = Vec2::new(w.y, -w.x) * (1.0 / r2);
    Ok(if y.y < 0.0 { g.mirror_y() } else { g })
}

/// Level set `{a . grad N_{loc} = value}`: a circle through the source with centre
/// `loc + zeta a` and radius `|zeta|`, `zeta = 1 / (4 pi value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelCircle {
    pub value: f64,
    pub center: Vec2,
    pub radius: f64,
}

pub fn level_circle_for_value(value: f64, spec: &DipoleSpec) -> Result<LevelCircle> {
    if value == 0.0 || !value.is_finite() {
        return Err(BowtieError::InvalidConfig("level value must be finite and non-zero".into()));
    }
    let zeta = 1.0 / (4.0 * PI * value);
    Ok(LevelCircle { value, center: spec.location + spec.direction * zeta, radius: zeta.abs() })
}

impl LevelCircle {
    pub fn point(&self, angle: f64) -> Vec2 {
        self.center + Vec2::from_angle(angle) * self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPoints {
    /// Physical points `eps P_1`, `eps P_2` where `d2 N_{eps e}` is maximal on the edges.
    pub max_points: [Vec2; 2],
    pub min_points: [Vec2; 2],
    pub max_value: f64,
    pub min_value: f64,
    /// Level circles in unit-gap variables touching the edges at the extremal points.
    pub max_circle: LevelCircle,
    pub min_circle: LevelCircle,
}

/// Candidate parameters on the ray `s0 + s d` where `d2 N_e` is stationary.
fn ray_candidates(s0: Vec2, d: Vec2, e: Vec2) -> Vec<f64> {
    let w = s0 - e;
    // d_y s^2 + 2 w_y s + 2 (w.d) w_y - d_y |w|^2 = 0
    let (qa, qb, qc) = (d.y, 2.0 * w.y, 2.0 * w.dot(d) * w.y - d.y * w.norm_sq());
    let mut out = vec![0.0];
    if qa.abs() < 1e-300 {
        if qb != 0.0 {
            out.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // stable root pair
            let t = -0.5 * (qb + qb.signum() * sq);
            if t != 0.0 {
                out.push(t / qa);
                out.push(qc / t);
            } else {
                out.push(0.0);
            }
        }
    }
    out.retain(|s| *s >= 0.0 && s.is_finite());
    out
}

fn d2n(y: Vec2, e: Vec2) -> f64 {
    let d = y - e;
    INV_2PI * d.y / d.norm_sq()
}

/// Extremes of `d2 N_{eps e}` over the straight cone edges, for `e = (0, p)`.
pub fn extremal_boundary_points(alpha: f64, p: f64, epsilon: f64) -> Result<ExtremalPoints> {
    if p == 0.0 || !p.is_finite() {
        return Err(BowtieError::InvalidConfig("emitter height must be non-zero".into()));
    }
    if p < 0.0 {
        let m = extremal_boundary_points(alpha, -p, epsilon)?;
        let flip = |c: LevelCircle| LevelCircle { value: -c.value, center: c.center.mirror_y(), radius: c.radius };
        return Ok(ExtremalPoints {
            max_points: [m.min_points[0].mirror_y(), m.min_points[1].mirror_y()],
            min_points: [m.max_points[0].mirror_y(), m.max_points[1].mirror_y()],
            max_value: -m.min_value,
            min_value: -m.max_value,
            max_circle: flip(m.min_circle),
            min_circle: flip(m.max_circle),
        });
    }
    let e = Vec2::new(0.0, p);
    let a = 0.5 * alpha;
    // right-cone rays; the left cone follows by x1-reflection symmetry
    let rays = [(Vec2::new(0.5, 0.0), Vec2::new(a.cos(), a.sin())), (Vec2::new(0.5, 0.0), Vec2::new(a.cos(), -a.sin()))];
    let mut best_max = (f64::NEG_INFINITY, Vec2::ZERO);
    let mut best_min = (f64::INFINITY, Vec2::ZERO);
    for (s0, d) in rays {
        for s in ray_candidates(s0, d, e) {
            let y = s0 + d * s;
            let v = d2n(y, e);
            if v > best_max.0 {
                best_max = (v, y);
            }
            if v < best_min.0 {
                best_min = (v, y);
            }
        }
    }
    let unit = DipoleSpec { direction: Vec2::new(0.0, 1.0), location: e };
    let max_circle = level_circle_for_value(best_max.0, &unit)?;
    let min_circle = level_circle_for_value(best_min.0, &unit)?;
    let pm = best_max.1 * epsilon;
    let qm = best_min.1 * epsilon;
    Ok(ExtremalPoints {
        max_points: [pm.mirror_x(), pm],
        min_points: [qm.mirror_x(), qm],
        max_value: best_max.0 / epsilon,
        min_value: best_min.0 / epsilon,
        max_circle,
        min_circle,
    })
}
