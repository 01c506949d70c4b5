//! Bow-tie geometry: configuration, inclusion shapes, graded panel meshes,
//! polar charts about the vertices and the circle criterion for the emitter height.

mod condition_a;
mod panel;
mod polar;

pub use condition_a::{check_condition_a, ConditionAResult};
pub use panel::{Panel, PanelShape};
pub use polar::{scale_relation_check, scaled_cone_contains, CornerChart};

use crate::error::{BowtieError, Result};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::ops::Range;

/// Which inclusions are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Both inclusions, vertices at `(-eps/2, 0)` and `(eps/2, 0)`.
    #[default]
    Pair,
    /// Only the left inclusion with vertex at `(-eps/2, 0)`.
    Single,
}

fn default_mu() -> f64 {
    1.5
}
fn default_panels() -> usize {
    32
}
fn default_order() -> usize {
    8
}
fn default_hmax() -> f64 {
    0.1
}
fn default_growth() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowtieConfig {
    /// Opening angle of each inclusion, in (0, pi).
    pub alpha: f64,
    /// Gap between the vertices.
    pub epsilon: f64,
    /// Radius of the ball in which the inclusions are exact cones.
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Graded panels on each edge next to a vertex.
    #[serde(default = "default_panels")]
    pub panels_per_side: usize,
    /// Grading exponent; defaults to `max(3, 2/beta)`.
    #[serde(default)]
    pub grading: Option<f64>,
    /// Fillet radius of the cap corners; defaults to `0.1 mu`.
    #[serde(default)]
    pub cap_fillet: Option<f64>,
    #[serde(default = "default_order")]
    pub nodes_per_panel: usize,
    #[serde(default = "default_hmax")]
    pub max_panel_length: f64,
    /// Ratio of panel length to distance from the vertex beyond the graded zone.
    #[serde(default = "default_growth")]
    pub growth: f64,
    #[serde(default)]
    pub layout: Layout,
}

impl BowtieConfig {
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        BowtieConfig {
            alpha,
            epsilon,
            mu: default_mu(),
            panels_per_side: default_panels(),
            grading: None,
            cap_fillet: None,
            nodes_per_panel: default_order(),
            max_panel_length: default_hmax(),
            growth: default_growth(),
            layout: Layout::Pair,
        }
    }

    pub fn single(alpha: f64, epsilon: f64) -> Self {
        BowtieConfig { layout: Layout::Single, ..Self::new(alpha, epsilon) }
    }

    pub fn beta(&self) -> f64 {
        PI / (2.0 * PI - self.alpha)
    }

    pub fn grading_exponent(&self) -> f64 {
        self.grading.unwrap_or_else(|| (2.0 / self.beta()).max(3.0))
    }

    pub fn fillet_radius(&self) -> f64 {
        self.cap_fillet.unwrap_or(0.1 * self.mu)
    }

    /// Length of each straight edge, measured from the vertex.
    pub fn edge_length(&self) -> f64 {
        self.mu + 0.25
    }

    pub fn vertex(&self, j: usize) -> Vec2 {
        match j {
            1 => Vec2::new(-0.5 * self.epsilon, 0.0),
            2 => Vec2::new(0.5 * self.epsilon, 0.0),
            _ => panic!("vertex index must be 1 or 2"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(BowtieError::InvalidGeometry(m.to_string()));
        if !(self.alpha > 0.0 && self.alpha < PI) {
            return bad("alpha must lie in (0, pi)");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive");
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad("mu must be positive");
        }
        if self.epsilon >= self.mu || self.epsilon > 0.25 {
            return bad("epsilon must be below min(mu, 1/4)");
        }
        if self.panels_per_side < 2 {
            return bad("panels_per_side must be at least 2");
        }
        if self.nodes_per_panel < 2 || self.nodes_per_panel > 32 {
            return bad("nodes_per_panel must be in [2, 32]");
        }
        if let Some(g) = self.grading {
            if !(g >= 1.0) {
                return bad("grading exponent must be >= 1");
            }
        }
        if !(self.max_panel_length > 0.0) || !(self.growth > 0.0 && self.growth <= 1.0) {
            return bad("max_panel_length must be positive and growth in (0, 1]");
        }
        let rf = self.fillet_radius();
        if !(rf > 0.0) {
            return bad("cap fillet radius must be positive");
        }
        let t = self.edge_length();
        if (rf / t).atan() >= 0.5 * self.alpha {
            return bad("cap fillet too large for the opening angle");
        }
        Ok(())
    }

    /// Inclusion shape of component `j` (1 or 2).
    pub fn sector(&self, j: usize) -> SectorShape {
        let axis = if j == 1 { Vec2::new(-1.0, 0.0) } else { Vec2::new(1.0, 0.0) };
        SectorShape::new(self.vertex(j), axis, 0.5 * self.alpha, self.edge_length(), self.fillet_radius())
    }

    /// True when `x` lies strictly inside an inclusion.
    pub fn contains(&self, x: Vec2) -> bool {
        match self.layout {
            Layout::Pair => self.sector(1).contains(x) || self.sector(2).contains(x),
            Layout::Single => self.sector(1).contains(x),
        }
    }
}

/// Circular sector of half-angle `half_angle` about `axis`, with filleted cap corners.
///
/// The straight edges run from the vertex to distance `edge_length`, where a fillet
/// of radius `fillet` joins them tangentially to the cap arc centred at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorShape {
    pub vertex: Vec2,
    pub axis: Vec2,
    pub half_angle: f64,
    pub edge_length: f64,
    pub fillet: f64,
    pub radius: f64,
    pub delta: f64,
}

impl SectorShape {
    pub fn new(vertex: Vec2, axis: Vec2, half_angle: f64, edge_length: f64, fillet: f64) -> Self {
        let radius = fillet + (edge_length * edge_length + fillet * fillet).sqrt();
        let delta = (fillet / edge_length).atan();
        SectorShape { vertex, axis: axis.normalized(), half_angle, edge_length, fillet, radius, delta }
    }

    fn to_local(&self, x: Vec2) -> Vec2 {
        let w = x - self.vertex;
        Vec2::new(w.dot(self.axis), w.dot(self.axis.perp()))
    }

    /// Upper fillet centre in local coordinates.
    fn fillet_center_local(&self) -> Vec2 {
        let a = self.half_angle;
        Vec2::new(self.edge_length, -self.fillet).rotate(a)
    }

    pub fn contains(&self, x: Vec2) -> bool {
        let l = self.to_local(x);
        let l = Vec2::new(l.x, l.y.abs());
        let r = l.norm();
        if r == 0.0 || r >= self.radius || l.y.atan2(l.x) >= self.half_angle {
            return false;
        }
        let c = self.fillet_center_local();
        let v = l - c;
        let a = self.half_angle;
        let d_start = Vec2::from_angle(a - self.delta);
        let d_end = Vec2::from_angle(a + 0.5 * PI);
        let in_cone = d_start.cross(v) >= 0.0 && v.cross(d_end) >= 0.0;
        !(in_cone && v.norm() >= self.fillet)
    }

    /// Closest distance from `x` to the straight edges, which is all that matters near the vertex.
    pub fn edge_distance(&self, x: Vec2) -> f64 {
        let l = self.to_local(x);
        let l = Vec2::new(l.x, l.y.abs());
        PanelShape::Line { a: Vec2::ZERO, b: Vec2::from_angle(self.half_angle) * self.edge_length }.distance(l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ComponentShape {
    Sector(SectorShape),
    Disk { center: Vec2, radius: f64 },
}

impl ComponentShape {
    pub fn contains(&self, x: Vec2) -> bool {
        match self {
            ComponentShape::Sector(s) => s.contains(x),
            ComponentShape::Disk { center, radius } => x.dist(*center) < *radius,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Component {
    /// Label used in output files (1 or 2 for the bow-tie).
    pub label: usize,
    pub panels: Range<usize>,
    pub shape: ComponentShape,
    pub vertex: Option<Vec2>,
}

/// Panel discretisation of the inclusion boundaries.
#[derive(Debug, Clone)]
pub struct PanelMesh {
    pub panels: Vec<Panel>,
    pub components: Vec<Component>,
    pub order: usize,
    /// Vertex gap of the generating configuration, if any.
    pub epsilon: Option<f64>,
    pub grading_exponent: f64,
}

/// Breakpoints along a straight edge measured from the vertex.
///
/// The first `n` panels are graded as `eps (k/n)^g`; beyond that panels grow
/// geometrically, at most doubling and never longer than `growth * s` or `h_max`.
pub fn edge_breakpoints(epsilon: f64, n: usize, g: f64, growth: f64, h_max: f64, length: f64) -> Vec<f64> {
    let zone = epsilon.min(0.5 * length);
    let mut s: Vec<f64> = (0..=n).map(|k| zone * (k as f64 / n as f64).powf(g)).collect();
    let mut h_prev = s[n] - s[n - 1];
    let mut cur = s[n];
    loop {
        let h = (2.0 * h_prev).min(growth * cur).min(h_max);
        if cur + 1.5 * h >= length {
            if length - cur > 0.0 {
                if length - cur > h {
                    // split the remainder into two near-equal panels
                    let mid = 0.5 * (cur + length);
                    s.push(mid);
                }
                s.push(length);
            }
            break;
        }
        cur += h;
        s.push(cur);
        h_prev = h;
    }
    s
}

/// Levels of dyadic refinement toward a curvature jump.
const JUNCTION_LEVELS: usize = 6;

/// Breakpoints of `[a, b]`, halved `JUNCTION_LEVELS` times toward the flagged ends.
fn dyadic(a: f64, b: f64, refine_start: bool, refine_end: bool) -> Vec<f64> {
    let mut out = vec![a, b];
    let h = b - a;
    let scale = 0.5f64.powi(JUNCTION_LEVELS as i32);
    if refine_start {
        out.extend((0..JUNCTION_LEVELS).map(|l| a + h * scale * 2f64.powi(l as i32) * if refine_end { 0.5 } else { 1.0 }));
    }
    if refine_end {
        out.extend((0..JUNCTION_LEVELS).map(|l| b - h * scale * 2f64.powi(l as i32) * if refine_start { 0.5 } else { 1.0 }));
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * h.abs());
    out
}

impl PanelMesh {
    /// Mesh of the configured inclusions.
    pub fn build(config: &BowtieConfig) -> Result<PanelMesh> {
        config.validate()?;
        let order = config.nodes_per_panel;
        let right = Self::right_inclusion_panels(config);
        let mut panels = Vec::new();
        let mut components = Vec::new();
        // left inclusion: rotation of the right one by pi
        let start = panels.len();
        for p in &right {
            panels.push(Panel::new(p.0.point_reflected(), components.len(), order, p.1, p.2));
        }
        components.push(Component {
            label: 1,
            panels: start..panels.len(),
            shape: ComponentShape::Sector(config.sector(1)),
            vertex: Some(config.vertex(1)),
        });
        if config.layout == Layout::Pair {
            let start = panels.len();
            for p in &right {
                panels.push(Panel::new(p.0, components.len(), order, p.1, p.2));
            }
            components.push(Component {
                label: 2,
                panels: start..panels.len(),
                shape: ComponentShape::Sector(config.sector(2)),
                vertex: Some(config.vertex(2)),
            });
        }
        Ok(PanelMesh {
            panels,
            components,
            order,
            epsilon: Some(config.epsilon),
            grading_exponent: config.grading_exponent(),
        })
    }

    /// Shapes of the right inclusion with arc-coordinate data, in boundary order.
    fn right_inclusion_panels(config: &BowtieConfig) -> Vec<(PanelShape, f64, f64)> {
        let sec = config.sector(2);
        let v = sec.vertex;
        let a = sec.half_angle;
        let t = sec.edge_length;
        let rf = sec.fillet;
        let h_max = config.max_panel_length;
        let breaks = edge_breakpoints(
            config.epsilon,
            config.panels_per_side,
            config.grading_exponent(),
            config.growth,
            h_max,
            t,
        );
        let mut lower: Vec<(PanelShape, f64, f64)> = Vec::new();
        let d_low = Vec2::new(a.cos(), -a.sin());
        let mut breaks = breaks;
        let last = breaks.len() - 1;
        let tail = dyadic(breaks[last - 1], breaks[last], false, true);
        breaks.truncate(last - 1);
        breaks.extend(tail);
        for w in breaks.windows(2) {
            lower.push((PanelShape::Line { a: v + d_low * w[0], b: v + d_low * w[1] }, w[0], 1.0));
        }
        let mut arc_pos = t;
        // lower fillet
        let c_low = v + Vec2::new(t, -rf).rotate(a).mirror_y();
        let th0 = -0.5 * PI - a;
        let th1 = -(a - sec.delta);
        let n_f = ((rf * (th1 - th0)) / h_max.min(rf * PI / 8.0)).ceil().max(2.0) as usize;
        let fillet: Vec<f64> = (0..n_f)
            .flat_map(|k| {
                let s0 = th0 + (th1 - th0) * k as f64 / n_f as f64;
                let s1 = th0 + (th1 - th0) * (k + 1) as f64 / n_f as f64;
                let mut b = dyadic(s0, s1, k == 0, k + 1 == n_f);
                b.pop();
                b
            })
            .chain(std::iter::once(th1))
            .collect();
        for w in fillet.windows(2) {
            let shape = PanelShape::Arc { center: c_low, radius: rf, theta0: w[0], theta1: w[1] };
            lower.push((shape, arc_pos, 1.0));
            arc_pos += shape.length();
        }
        // lower half of the cap arc
        let r = sec.radius;
        let th0 = -(a - sec.delta);
        let n_a = ((r * (-th0)) / h_max).ceil().max(2.0) as usize;
        let cap: Vec<f64> = (0..n_a)
            .flat_map(|k| {
                let s0 = th0 * (1.0 - k as f64 / n_a as f64);
                let s1 = th0 * (1.0 - (k + 1) as f64 / n_a as f64);
                let mut b = dyadic(s0, s1, k == 0, false);
                b.pop();
                b
            })
            .chain(std::iter::once(0.0))
            .collect();
        for w in cap.windows(2) {
            let shape = PanelShape::Arc { center: v, radius: r, theta0: w[0], theta1: w[1] };
            lower.push((shape, arc_pos, 1.0));
            arc_pos += shape.length();
        }
        // upper half mirrors the lower half, traversed backwards
        let mut all = lower.clone();
        for (shape, start, _) in lower.iter().rev() {
            let len = shape.length();
            all.push((shape.mirrored_reversed(), start + len, -1.0));
        }
        all
    }

    /// Uniform mesh of a circle, traversed counter-clockwise.
    pub fn circle(center: Vec2, radius: f64, n_panels: usize, order: usize) -> Result<PanelMesh> {
        if !(radius > 0.0) || n_panels < 3 {
            return Err(BowtieError::InvalidGeometry("circle needs radius > 0 and >= 3 panels".into()));
        }
        let panels = (0..n_panels)
            .map(|k| {
                let th0 = 2.0 * PI * k as f64 / n_panels as f64;
                let th1 = 2.0 * PI * (k + 1) as f64 / n_panels as f64;
                Panel::new(PanelShape::Arc { center, radius, theta0: th0, theta1: th1 }, 0, order, radius * th0, 1.0)
            })
            .collect();
        Ok(PanelMesh {
            panels,
            components: vec![Component {
                label: 1,
                panels: 0..n_panels,
                shape: ComponentShape::Disk { center, radius },
                vertex: None,
            }],
            order,
            epsilon: None,
            grading_exponent: 1.0,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.panels.len() * self.order
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// True when `x` is strictly inside some inclusion.
    pub fn contains(&self, x: Vec2) -> bool {
        self.components.iter().any(|c| c.shape.contains(x))
    }

    /// Iterator over `(global index, panel index, node index)`.
    pub fn node_indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let q = self.order;
        (0..self.panels.len()).flat_map(move |p| (0..q).map(move |k| (p * q + k, p, k)))
    }

    pub fn node(&self, i: usize) -> Vec2 {
        self.panels[i / self.order].nodes[i % self.order]
    }

    pub fn normal(&self, i: usize) -> Vec2 {
        self.panels[i / self.order].normals[i % self.order]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.panels[i / self.order].weights[i % self.order]
    }

    pub fn arc_coordinate(&self, i: usize) -> f64 {
        self.panels[i / self.order].arc_coordinate[i % self.order]
    }

    pub fn component_of_node(&self, i: usize) -> usize {
        self.panels[i / self.order].component
    }

    /// Quadrature approximation of the perimeter of each component.
    pub fn perimeters(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.components.len()];
        for p in &self.panels {
            out[p.component] += p.weights.iter().sum::<f64>();
        }
        out
    }

    /// Distance from `x` to the nearest panel and that panel's index.
    pub fn nearest_panel(&self, x: Vec2) -> (usize, f64) {
        self.panels
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.shape.distance(x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("mesh has no panels")
    }

    /// Check that a point source sits well away from the discretised boundary:
    /// at least ten lengths of the nearest panel, and outside every inclusion.
    pub fn check_source_clearance(&self, x: Vec2) -> Result<()> {
        if self.contains(x) {
            return Err(BowtieError::InsideInclusion { x: x.x, y: x.y });
        }
        let (p, d) = self.nearest_panel(x);
        let required = 10.0 * self.panels[p].length;
        if d < required {
            return Err(BowtieError::EmitterTooClose { distance: d, required });
        }
        Ok(())
    }

    /// Hex digest of the node coordinates, weights and component labels.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for p in &self.panels {
            h.update((p.component as u64).to_le_bytes());
            for (x, w) in p.nodes.iter().zip(&p.weights) {
                h.update(x.x.to_le_bytes());
                h.update(x.y.to_le_bytes());
                h.update(w.to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoints_are_monotone_and_end_at_length() {
        let b = edge_breakpoints(0.01, 16, 3.0, 0.25, 0.1, 1.75);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*b.last().unwrap(), 1.75);
        assert!((b[16] - 0.01).abs() < 1e-15);
        // adjacent panel lengths never jump by more than the grading allows
        let h: Vec<f64> = b.windows(2).map(|w| w[1] - w[0]).collect();
        for w in h[15..].windows(2) {
            assert!(w[1] / w[0] < 2.01 && w[0] / w[1] < 2.01, "{:?}", w);
        }
    }

    #[test]
    fn sector_contains_vertex_neighbourhood_interior_only() {
        let c = BowtieConfig::new(PI / 2.0, 0.02);
        let s = c.sector(2);
        assert!(s.contains(Vec2::new(0.01 + 1e-4, 0.0)));
        assert!(!s.contains(Vec2::new(0.01 - 1e-4, 0.0)));
        assert!(!s.contains(Vec2::new(0.02, 0.011)));
        assert!(s.contains(Vec2::new(0.02, 0.009)));
        // corner cut-out region is outside
        let corner = Vec2::new(0.01, 0.0) + Vec2::from_angle(PI / 4.0) * (s.radius - 1e-3);
        assert!(!s.contains(corner));
    }
}
