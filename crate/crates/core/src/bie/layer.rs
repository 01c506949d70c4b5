//! Panel integration of the single-layer kernel and its derivatives.
//!
//! All routines produce weights `w_j` on the panel's nodes so that
//! `\int K(x, y) rho(y) ds_y ~ sum_j w_j rho_j`, with `rho` interpolated by the
//! panel's Lagrange polynomial when the panel is subdivided.

use crate::geometry::{Panel, PanelShape};
use crate::quadrature::{panel_rule, LEAF_ORDER};
use crate::vec2::Vec2;
use std::f64::consts::PI;

const INV_2PI: f64 = 0.5 / PI;

/// A panel is near a target when closer than this many panel lengths.
pub const NEAR_FACTOR: f64 = 3.0;
const MAX_DEPTH: usize = 60;

/// Which kernel to integrate.
#[derive(Debug, Clone, Copy)]
pub enum Kernel {
    /// `N(x - y) = log|x - y| / 2 pi`.
    Potential,
    /// `grad_x N(x - y)`, two outputs.
    Gradient,
    /// `n . grad_x N(x - y)` for a fixed unit vector `n`.
    NormalDerivative(Vec2),
}

impl Kernel {
    #[inline]
    fn outputs(&self) -> usize {
        match self {
            Kernel::Gradient => 2,
            _ => 1,
        }
    }

    #[inline]
    fn eval(&self, x: Vec2, y: Vec2, out: &mut [f64; 2]) {
        let d = x - y;
        let r2 = d.norm_sq();
        match *self {
            Kernel::Potential => out[0] = 0.5 * INV_2PI * r2.ln(),
            Kernel::Gradient => {
                let c = INV_2PI / r2;
                out[0] = d.x * c;
                out[1] = d.y * c;
            }
            Kernel::NormalDerivative(n) => out[0] = INV_2PI * n.dot(d) / r2,
        }
    }
}

/// Accumulate kernel weights of `panel` at target `x` into `out`
/// (`out[k][j]` for output `k` and node `j`). `self_node` marks `x` as node
/// `self_node` of this very panel.
pub fn panel_weights(panel: &Panel, x: Vec2, kernel: Kernel, self_node: Option<usize>, out: &mut [Vec<f64>]) {
    let q = panel.order();
    if let Some(i) = self_node {
        self_panel_weights(panel, i, kernel, out);
        return;
    }
    let dist = panel.shape.distance(x);
    if dist >= NEAR_FACTOR * panel.length {
        let mut kv = [0.0; 2];
        for j in 0..q {
            kernel.eval(x, panel.nodes[j], &mut kv);
            for k in 0..kernel.outputs() {
                out[k][j] += kv[k] * panel.weights[j];
            }
        }
    } else {
        let rule = panel_rule(q);
        let leaf = panel_rule(LEAF_ORDER);
        let mut basis = vec![0.0; q];
        subdivide(&panel.shape, -1.0, 1.0, x, kernel, rule, leaf, &mut basis, out, 0);
    }
}

#[allow(clippy::too_many_arguments)]
fn subdivide(
    shape: &PanelShape,
    ta: f64,
    tb: f64,
    x: Vec2,
    kernel: Kernel,
    rule: &crate::quadrature::PanelRule,
    leaf: &crate::quadrature::PanelRule,
    basis: &mut [f64],
    out: &mut [Vec<f64>],
    depth: usize,
) {
    let sub = shape.sub(ta, tb);
    if depth < MAX_DEPTH && sub.distance(x) < NEAR_FACTOR * sub.length() {
        let tm = 0.5 * (ta + tb);
        subdivide(shape, ta, tm, x, kernel, rule, leaf, basis, out, depth + 1);
        subdivide(shape, tm, tb, x, kernel, rule, leaf, basis, out, depth + 1);
        return;
    }
    let half = 0.5 * (tb - ta);
    let mid = 0.5 * (tb + ta);
    let mut kv = [0.0; 2];
    for (&s, &w) in leaf.nodes.iter().zip(&leaf.weights) {
        let t = mid + half * s;
        let y = shape.position(t);
        let jac = shape.derivative(t).norm() * w * half;
        kernel.eval(x, y, &mut kv);
        rule.lagrange_basis(t, basis);
        for k in 0..kernel.outputs() {
            let c = kv[k] * jac;
            for (o, b) in out[k].iter_mut().zip(basis.iter()) {
                *o += c * b;
            }
        }
    }
}

/// Target at node `i` of the same panel.
fn self_panel_weights(panel: &Panel, i: usize, kernel: Kernel, out: &mut [Vec<f64>]) {
    let q = panel.order();
    let rule = panel_rule(q);
    let x = panel.nodes[i];
    match kernel {
        Kernel::Potential => {
            // log|x - y(t)| = log|t - t_i| + log(|x - y(t)| / |t - t_i|)
            for j in 0..q {
                let smooth = if j == i {
                    panel.speed[i].ln()
                } else {
                    (x.dist(panel.nodes[j]) / (rule.nodes[j] - rule.nodes[i]).abs()).ln()
                };
                let w_log = rule.log_weights[i * q + j] * panel.speed[j];
                out[0][j] += INV_2PI * (w_log + smooth * panel.weights[j]);
            }
        }
        Kernel::NormalDerivative(n) => {
            // smooth kernel; diagonal limit is -kappa (n . nu) / (4 pi)
            let kappa = panel.shape.curvature();
            for j in 0..q {
                let v = if j == i {
                    -kappa * n.dot(panel.normals[i]) * 0.5 * INV_2PI
                } else {
                    let d = x - panel.nodes[j];
                    INV_2PI * n.dot(d) / d.norm_sq()
                };
                out[0][j] += v * panel.weights[j];
            }
        }
        Kernel::Gradient => panic!("gradient of the single layer is not defined on the boundary"),
    }
}
