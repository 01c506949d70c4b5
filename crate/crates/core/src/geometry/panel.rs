use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parametrised boundary piece on the reference interval [-1, 1].
///
/// Arcs are traversed counter-clockwise about their centre when `theta1 > theta0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PanelShape {
    Line { a: Vec2, b: Vec2 },
    Arc { center: Vec2, radius: f64, theta0: f64, theta1: f64 },
}

impl PanelShape {
    pub fn position(&self, t: f64) -> Vec2 {
        let s = 0.5 * (t + 1.0);
        match *self {
            PanelShape::Line { a, b } => a + (b - a) * s,
            PanelShape::Arc { center, radius, theta0, theta1 } => {
                center + Vec2::from_angle(theta0 + s * (theta1 - theta0)) * radius
            }
        }
    }

    /// Derivative of the position with respect to the reference parameter.
    pub fn derivative(&self, t: f64) -> Vec2 {
        match *self {
            PanelShape::Line { a, b } => (b - a) * 0.5,
            PanelShape::Arc { radius, theta0, theta1, .. } => {
                let th = theta0 + 0.5 * (t + 1.0) * (theta1 - theta0);
                Vec2::from_angle(th).perp() * (0.5 * radius * (theta1 - theta0))
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PanelShape::Line { a, b } => a.dist(b),
            PanelShape::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0).abs(),
        }
    }

    /// Signed curvature with the convention that a counter-clockwise arc is positive.
    pub fn curvature(&self) -> f64 {
        match *self {
            PanelShape::Line { .. } => 0.0,
            PanelShape::Arc { radius, theta0, theta1, .. } => (theta1 - theta0).signum() / radius,
        }
    }

    /// The piece corresponding to the reference sub-interval `[ta, tb]`.
    pub fn sub(&self, ta: f64, tb: f64) -> PanelShape {
        match *self {
            PanelShape::Line { .. } => PanelShape::Line { a: self.position(ta), b: self.position(tb) },
            PanelShape::Arc { center, radius, theta0, theta1 } => {
                let th = |t: f64| theta0 + 0.5 * (t + 1.0) * (theta1 - theta0);
                PanelShape::Arc { center, radius, theta0: th(ta), theta1: th(tb) }
            }
        }
    }

    /// Euclidean distance from `x` to the piece.
    pub fn distance(&self, x: Vec2) -> f64 {
        match *self {
            PanelShape::Line { a, b } => {
                let d = b - a;
                let l2 = d.norm_sq();
                let s = if l2 > 0.0 { ((x - a).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
                x.dist(a + d * s)
            }
            PanelShape::Arc { center, radius, theta0, theta1 } => {
                let w = x - center;
                let (lo, hi) = if theta1 >= theta0 { (theta0, theta1) } else { (theta1, theta0) };
                let ang = w.angle();
                // bring ang into [lo, lo + 2pi)
                let rel = (ang - lo).rem_euclid(2.0 * PI);
                if rel <= hi - lo {
                    (w.norm() - radius).abs()
                } else {
                    let pa = center + Vec2::from_angle(lo) * radius;
                    let pb = center + Vec2::from_angle(hi) * radius;
                    x.dist(pa).min(x.dist(pb))
                }
            }
        }
    }

    /// Reflection across the x1 axis with reversed traversal, which keeps the
    /// orientation of a closed curve assembled from mirrored pieces.
    pub fn mirrored_reversed(&self) -> PanelShape {
        match *self {
            PanelShape::Line { a, b } => PanelShape::Line { a: b.mirror_y(), b: a.mirror_y() },
            PanelShape::Arc { center, radius, theta0, theta1 } => PanelShape::Arc {
                center: center.mirror_y(),
                radius,
                theta0: -theta1,
                theta1: -theta0,
            },
        }
    }

    /// Rotation by pi about the origin.
    pub fn point_reflected(&self) -> PanelShape {
        match *self {
            PanelShape::Line { a, b } => PanelShape::Line { a: -a, b: -b },
            PanelShape::Arc { center, radius, theta0, theta1 } => PanelShape::Arc {
                center: -center,
                radius,
                theta0: theta0 + PI,
                theta1: theta1 + PI,
            },
        }
    }
}

/// A discretised panel: shape plus Gauss nodes, physical weights and normals.
#[derive(Debug, Clone)]
pub struct Panel {
    pub shape: PanelShape,
    /// Zero-based index of the owning component.
    pub component: usize,
    pub nodes: Vec<Vec2>,
    /// Unit normals pointing into the inclusion.
    pub normals: Vec<Vec2>,
    /// Physical quadrature weights (reference weight times speed).
    pub weights: Vec<f64>,
    /// Speed `|dy/dt|` at the nodes.
    pub speed: Vec<f64>,
    /// Arc length along the boundary from the component vertex, per node.
    pub arc_coordinate: Vec<f64>,
    pub length: f64,
}

impl Panel {
    /// Build a panel. `arc_start` is the arc coordinate at `t = -1`; `arc_sign` is
    /// `+1` when the arc coordinate increases along the traversal.
    pub fn new(shape: PanelShape, component: usize, order: usize, arc_start: f64, arc_sign: f64) -> Self {
        let rule = crate::quadrature::panel_rule(order);
        let length = shape.length();
        let mut nodes = Vec::with_capacity(order);
        let mut normals = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let mut speed = Vec::with_capacity(order);
        let mut arc = Vec::with_capacity(order);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let d = shape.derivative(t);
            let sp = d.norm();
            nodes.push(shape.position(t));
            normals.push(d.perp() * (1.0 / sp));
            weights.push(w * sp);
            speed.push(sp);
            arc.push(arc_start + arc_sign * 0.5 * (t + 1.0) * length);
        }
        Panel { shape, component, nodes, normals, weights, speed, arc_coordinate: arc, length }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}
