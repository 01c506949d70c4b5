//! Evaluation of solved problems: potentials, gradients, boundary normal
//! derivatives, corner Fourier coefficients and the decomposition identity.

use crate::bie::{panel_weights, Kernel, ProblemKind, SolveResult};
use crate::error::{BowtieError, Result};
use crate::geometry::CornerChart;
use crate::quadrature::gauss_legendre;
use crate::vec2::Vec2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Nodes closer than this fraction of the gap (in arc length) to a vertex are
/// not used for boundary normal derivatives.
pub const VERTEX_EXCLUSION: f64 = 0.005;

fn check_point(result: &SolveResult, x: Vec2) -> Result<()> {
    if !x.is_finite() {
        return Err(BowtieError::SingularPoint("non-finite evaluation point".into()));
    }
    if result.mesh.contains(x) {
        return Err(BowtieError::InsideInclusion { x: x.x, y: x.y });
    }
    if let Some(d) = result.kind.dipole() {
        if x.dist(d.location) < 1e-12 {
            return Err(BowtieError::SingularPoint("evaluation at the emitter".into()));
        }
    }
    Ok(())
}

fn layer_sum(result: &SolveResult, x: Vec2, kernel: Kernel, outputs: usize) -> [f64; 2] {
    let q = result.mesh.order;
    let mut buf = vec![vec![0.0; q]; outputs];
    let mut acc = [0.0; 2];
    for (p, panel) in result.mesh.panels.iter().enumerate() {
        for b in buf.iter_mut() {
            b.iter_mut().for_each(|v| *v = 0.0);
        }
        panel_weights(panel, x, kernel, None, &mut buf);
        for (k, b) in buf.iter().enumerate() {
            acc[k] += b.iter().zip(&result.density[p * q..(p + 1) * q]).map(|(w, r)| w * r).sum::<f64>();
        }
    }
    acc
}

/// `u(x)` including the free-space part.
pub fn eval_potential(result: &SolveResult, x: Vec2) -> Result<f64> {
    check_point(result, x)?;
    let s = layer_sum(result, x, Kernel::Potential, 1)[0];
    let extra = if result.kind.has_floating_constants() { 0.0 } else { result.constants[0] };
    Ok(result.kind.particular(x)? + s + extra)
}

/// `grad u(x)` including the free-space part.
pub fn eval_gradient(result: &SolveResult, x: Vec2) -> Result<Vec2> {
    check_point(result, x)?;
    let g = layer_sum(result, x, Kernel::Gradient, 2);
    Ok(result.kind.particular_gradient(x)? + Vec2::new(g[0], g[1]))
}

/// Potential and gradient at many points, in input order.
pub fn eval_batch(result: &SolveResult, points: &[Vec2]) -> Result<Vec<(f64, Vec2)>> {
    crate::parallel::install(|| {
        points
            .par_iter()
            .map(|&x| Ok((eval_potential(result, x)?, eval_gradient(result, x)?)))
            .collect()
    })
}

/// Exterior derivative `d_nu u` at mesh node `node`, `nu` pointing into the inclusion.
pub fn normal_derivative_on_boundary(result: &SolveResult, node: usize) -> Result<f64> {
    let mesh = &result.mesh;
    if node >= mesh.n_nodes() {
        return Err(BowtieError::InvalidConfig("node index out of range".into()));
    }
    if let Some(eps) = mesh.epsilon {
        if mesh.arc_coordinate(node) < VERTEX_EXCLUSION * eps {
            return Err(BowtieError::SingularPoint(format!("node {node} is adjacent to a vertex")));
        }
    }
    let rho = result.density[node];
    let x = mesh.node(node);
    let nu = mesh.normal(node);
    match &result.kind {
        k if k.has_floating_constants() => Ok(-rho),
        ProblemKind::AuxiliaryV(d) => Ok(-rho + nu.dot(d.gradient(x)?)),
        _ => {
            // d_n S_ext = rho / 2 + K' rho with n the outward normal
            let q = mesh.order;
            let pi = node / q;
            let mut buf = vec![vec![0.0; q]];
            let mut kp = 0.0;
            for (p, panel) in mesh.panels.iter().enumerate() {
                buf[0].iter_mut().for_each(|v| *v = 0.0);
                let self_node = if p == pi { Some(node % q) } else { None };
                panel_weights(panel, x, Kernel::NormalDerivative(-nu), self_node, &mut buf);
                kp += buf[0].iter().zip(&result.density[p * q..(p + 1) * q]).map(|(w, r)| w * r).sum::<f64>();
            }
            Ok(-(0.5 * rho + kp))
        }
    }
}

/// Leading Fourier coefficient of the scaled trace about a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerCoefficient {
    pub vertex_id: usize,
    pub a1: f64,
    /// Second mode, reported for diagnostics.
    pub a2: f64,
    pub arc_radius: f64,
    /// Value obtained on the half-radius arc.
    pub a1_half_radius: f64,
    /// Relative change between the two radii.
    pub truncation_estimate: f64,
}

/// Fourier coefficients `a_n`, `n = 1..=modes`, of a unit-gap trace `f` on the arc
/// of scaled radius `r` about `chart`'s vertex.
pub fn fourier_modes(f: &dyn Fn(Vec2) -> Result<f64>, chart: &CornerChart, r: f64, modes: usize) -> Result<Vec<f64>> {
    let (t, w) = gauss_legendre(64);
    let open = chart.opening();
    let beta = chart.beta();
    let mut acc = vec![0.0; modes];
    for (ti, wi) in t.iter().zip(&w) {
        let th = 0.5 * open * (ti + 1.0);
        let v = f(chart.point(r, th))?;
        for (n, a) in acc.iter_mut().enumerate() {
            *a += 0.5 * open * wi * v * ((n + 1) as f64 * beta * th).sin();
        }
    }
    Ok(acc
        .iter()
        .enumerate()
        .map(|(n, a)| 2.0 / (open * r.powf((n + 1) as f64 * beta)) * a)
        .collect())
}

/// Extract `a_1` at vertex `vertex_id` from a solve on a bow-tie or single-inclusion mesh.
///
/// The trace is `eps (u - c_j)` in unit-gap variables; `arc_radius` is physical.
pub fn extract_corner_coefficient(result: &SolveResult, vertex_id: usize, arc_radius: f64) -> Result<CornerCoefficient> {
    let eps = result
        .mesh
        .epsilon
        .ok_or_else(|| BowtieError::InvalidConfig("corner extraction needs a bow-tie mesh".into()))?;
    if !(arc_radius > 0.0 && arc_radius <= 0.2 * eps) {
        return Err(BowtieError::InvalidConfig("arc radius must lie in (0, 0.2 eps]".into()));
    }
    let comp = result
        .mesh
        .components
        .iter()
        .find(|c| c.label == vertex_id)
        .ok_or_else(|| BowtieError::InvalidConfig(format!("no vertex {vertex_id} in this mesh")))?;
    let vertex = comp.vertex.ok_or_else(|| BowtieError::InvalidConfig("component has no vertex".into()))?;
    let alpha = match comp.shape {
        crate::geometry::ComponentShape::Sector(s) => 2.0 * s.half_angle,
        _ => return Err(BowtieError::InvalidConfig("component has no vertex".into())),
    };
    let offset = result.constant(vertex_id);
    let chart = CornerChart::scaled(vertex_id, alpha);
    let shift = vertex - chart.vertex * eps;
    let trace = |y: Vec2| -> Result<f64> { Ok(eps * (eval_potential(result, y * eps + shift)? - offset)) };
    let r = arc_radius / eps;
    let full = fourier_modes(&trace, &chart, r, 2)?;
    let half = fourier_modes(&trace, &chart, 0.5 * r, 1)?;
    let change = ((half[0] - full[0]) / full[0]).abs();
    let cc = CornerCoefficient {
        vertex_id,
        a1: full[0],
        a2: full[1],
        arc_radius,
        a1_half_radius: half[0],
        truncation_estimate: change,
    };
    if !(change < 0.05) {
        return Err(BowtieError::Fit(format!(
            "corner coefficient unstable: {:.6e} at r, {:.6e} at r/2",
            full[0], half[0]
        )));
    }
    Ok(cc)
}

/// Largest `|grad sigma - grad(a . grad N) + grad v|` over `samples`, where
/// `sigma = u - ((c2 - c1)/(l2 - l1)) q`.
pub fn sigma_consistency(u: &SolveResult, q: &SolveResult, v: &SolveResult, samples: &[Vec2]) -> Result<f64> {
    let h = u.mesh.hash();
    if q.mesh.hash() != h || v.mesh.hash() != h {
        return Err(BowtieError::ProblemMismatch("solutions live on different meshes".into()));
    }
    let dip = match (&u.kind, &v.kind, &q.kind) {
        (ProblemKind::Emitter(a), ProblemKind::AuxiliaryV(b), ProblemKind::CapacityQ) if a == b => *a,
        _ => return Err(BowtieError::ProblemMismatch("need emitter, capacity and auxiliary solutions".into())),
    };
    let k = (u.constant(2) - u.constant(1)) / (q.constant(2) - q.constant(1));
    let devs: Vec<f64> = crate::parallel::install(|| {
        samples
            .par_iter()
            .map(|&x| -> Result<f64> {
                let gs = eval_gradient(u, x)? - eval_gradient(q, x)? * k;
                let rhs = dip.gradient(x)? - eval_gradient(v, x)?;
                Ok((gs - rhs).norm())
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NearVertex,
    MidRange,
    Far,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::NearVertex => "near_vertex",
            Regime::MidRange => "mid_range",
            Regime::Far => "far",
        }
    }
}

/// Regime boundaries: near within `near * eps` of a vertex; mid-range for
/// `mid_lower * eps |log eps| < |X| < mid_upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub near: f64,
    pub mid_lower: f64,
    pub mid_upper: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { near: 0.1, mid_lower: 10.0, mid_upper: 0.3 }
    }
}

impl RegimeThresholds {
    pub fn classify(&self, x: Vec2, epsilon: f64) -> Regime {
        let v1 = Vec2::new(-0.5 * epsilon, 0.0);
        let v2 = Vec2::new(0.5 * epsilon, 0.0);
        let r = x.norm();
        if x.dist(v1).min(x.dist(v2)) < self.near * epsilon {
            Regime::NearVertex
        } else if r > self.mid_lower * epsilon * epsilon.ln().abs() && r < self.mid_upper {
            Regime::MidRange
        } else {
            Regime::Far
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: Vec2,
    pub u: f64,
    pub grad_u: Vec2,
    pub dist_v1: f64,
    pub dist_v2: f64,
    pub dist_emitter: f64,
    pub regime: Regime,
}

impl FieldSample {
    pub fn grad_norm(&self) -> f64 {
        self.grad_u.norm()
    }
}

/// Evaluate `result` at `points` and tag each sample with its regime.
pub fn sample_field(result: &SolveResult, points: &[Vec2], thresholds: &RegimeThresholds) -> Result<Vec<FieldSample>> {
    let vals = eval_batch(result, points)?;
    let eps = result.mesh.epsilon.unwrap_or(0.0);
    let v1 = Vec2::new(-0.5 * eps, 0.0);
    let v2 = Vec2::new(0.5 * eps, 0.0);
    let emitter = result.kind.dipole().map(|d| d.location);
    Ok(points
        .iter()
        .zip(vals)
        .map(|(&x, (u, g))| FieldSample {
            point: x,
            u,
            grad_u: g,
            dist_v1: x.dist(v1),
            dist_v2: x.dist(v2),
            dist_emitter: emitter.map_or(f64::INFINITY, |e| x.dist(e)),
            regime: if eps > 0.0 { thresholds.classify(x, eps) } else { Regime::Far },
        })
        .collect())
}

/// Unit vector of the exterior bisector at vertex `vertex_id` of a symmetric bow-tie.
pub fn exterior_bisector(vertex_id: usize) -> Vec2 {
    if vertex_id == 1 {
        Vec2::new(1.0, 0.0)
    } else {
        Vec2::new(-1.0, 0.0)
    }
}

