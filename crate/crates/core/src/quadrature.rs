//! Panel quadrature: Gauss–Legendre rules, log-modified self-panel weights and
//! barycentric interpolation on the Gauss nodes.

use gauss_quad::GaussLegendre;
use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Mutex, OnceLock};

/// Points of the leaf rule used on subdivided near-singular panels.
pub const LEAF_ORDER: usize = 16;

/// A Gauss–Legendre rule on [-1, 1] together with the data needed for
/// singular and near-singular panel integration.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub order: usize,
    /// Nodes in increasing order.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Barycentric interpolation weights for `nodes`.
    pub bary: Vec<f64>,
    /// Row-major `order x order` matrix: entry `(i, j)` integrates
    /// `log|t - t_i| f(t)` against the value `f(t_j)`.
    pub log_weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights of the given order, nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = NonZeroUsize::new(order).expect("quadrature order must be positive");
    let rule = GaussLegendre::new(n);
    let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Cached rule of the given order.
pub fn panel_rule(order: usize) -> &'static PanelRule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static PanelRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(PanelRule::new(order))))
}

impl PanelRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        let bary = barycentric_weights(&nodes);
        let mut log_weights = vec![0.0; order * order];
        let mut pk = vec![0.0; order];
        // P_k(t_j) for all j, k
        let mut p_at_nodes = vec![0.0; order * order];
        for (j, &t) in nodes.iter().enumerate() {
            legendre_p_all(t, &mut pk);
            for k in 0..order {
                p_at_nodes[k * order + j] = pk[k];
            }
        }
        for (i, &a) in nodes.iter().enumerate() {
            let moments = log_moments(a, order);
            for j in 0..order {
                let mut s = 0.0;
                for k in 0..order {
                    s += moments[k] * (2 * k + 1) as f64 * 0.5 * p_at_nodes[k * order + j];
                }
                log_weights[i * order + j] = s * weights[j];
            }
        }
        PanelRule { order, nodes, weights, bary, log_weights }
    }

    /// Lagrange basis values `L_j(t)` on the rule nodes, written into `out`.
    pub fn lagrange_basis(&self, t: f64, out: &mut [f64]) {
        lagrange_basis(&self.nodes, &self.bary, t, out);
    }
}

/// Values `P_0(x) .. P_{n-1}(x)`.
pub fn legendre_p_all(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n > 1 {
        out[1] = x;
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
    }
}

/// `I_k(a) = \int_{-1}^{1} log|t - a| P_k(t) dt` for `k < n`, `|a| < 1`.
pub fn log_moments(a: f64, n: usize) -> Vec<f64> {
    assert!(a.abs() < 1.0, "log moments need |a| < 1");
    // Legendre functions of the second kind on the cut, Q_0 .. Q_n.
    let mut q = vec![0.0; n + 1];
    q[0] = 0.5 * ((1.0 + a) / (1.0 - a)).ln();
    if n >= 1 {
        q[1] = a * q[0] - 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        q[k + 1] = ((2.0 * kf + 1.0) * a * q[k] - kf * q[k - 1]) / (kf + 1.0);
    }
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[0] = (1.0 - a) * (1.0 - a).ln() + (1.0 + a) * (1.0 + a).ln() - 2.0;
    for k in 1..n {
        out[k] = 2.0 / (2 * k + 1) as f64 * (q[k + 1] - q[k - 1]);
    }
    out
}

pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &tj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &tk)| tj - tk)
                .product();
            1.0 / prod
        })
        .collect()
}

pub fn lagrange_basis(nodes: &[f64], bary: &[f64], t: f64, out: &mut [f64]) {
    for (j, &tj) in nodes.iter().enumerate() {
        if t == tj {
            out.iter_mut().for_each(|o| *o = 0.0);
            out[j] = 1.0;
            return;
        }
    }
    let mut denom = 0.0;
    for j in 0..nodes.len() {
        let c = bary[j] / (t - nodes[j]);
        out[j] = c;
        denom += c;
    }
    for o in out.iter_mut() {
        *o /= denom;
    }
}
