//! Finite-difference reference on a truncated box.
//!
//! Solves for the regular part `w = u - a . grad N` with the 5-point Laplacian.
//! Grid arms cut by an inclusion use Shortley–Weller spacing, with the crossing
//! located by bisection on the exact shape. Box-edge values come from a supplied
//! function, typically a boundary-integral solution. Relaxation is red-black SOR
//! started from the interpolated solution of the next coarser grid.

use crate::error::{BowtieError, Result};
use crate::geometry::BowtieConfig;
use crate::vec2::Vec2;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct FdGrid {
    /// Nodes per side (`cells + 1`).
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: Vec2,
    /// Row-major values of `w`; NaN inside inclusions.
    pub values: Vec<f64>,
    pub sweeps: usize,
}

impl FdGrid {
    pub fn point(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// CSV header describing the binary layout.
    pub fn header_csv(&self) -> String {
        format!(
            "nx,ny,h,origin_x,origin_y\n{},{},{},{},{}\n",
            self.nx,
            self.ny,
            crate::io::fmt_f64(self.h),
            crate::io::fmt_f64(self.origin.x),
            crate::io::fmt_f64(self.origin.y)
        )
    }

    pub fn export(&self, dir: &std::path::Path, stem: &str) -> Result<()> {
        crate::io::write_text(&dir.join(format!("{stem}.csv")), &self.header_csv())?;
        crate::io::write_f64_le(&dir.join(format!("{stem}.bin")), &self.values)
    }
}

/// Inputs of the finite-difference reference.
pub struct FdProblem<'a> {
    pub geometry: &'a BowtieConfig,
    /// Value of `w` on the inclusion boundaries as a function of position and component.
    pub inclusion_data: &'a (dyn Fn(Vec2, usize) -> f64 + Sync),
    /// Value of `w` on the box edges.
    pub box_data: &'a (dyn Fn(Vec2) -> f64 + Sync),
    /// Half side of the box centred at the origin.
    pub half_width: f64,
}

const MAX_CELLS: usize = 4096;

enum Arm {
    Node(usize),
    Fixed(f64),
}

struct Stencil {
    arms: [(f64, Arm); 4],
    diag: f64,
}

fn crossing(geom: &BowtieConfig, inside_pt: Vec2, outside_pt: Vec2) -> Vec2 {
    // outside_pt is exterior, inside_pt is in an inclusion
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if geom.contains(outside_pt + (inside_pt - outside_pt) * mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    outside_pt + (inside_pt - outside_pt) * (0.5 * (lo + hi))
}

fn component_of(geom: &BowtieConfig, x: Vec2) -> usize {
    if x.x < 0.0 {
        1
    } else {
        2
    }
    .min(if geom.layout == crate::geometry::Layout::Single { 1 } else { 2 })
}

/// Solve on a grid with `cells` intervals per side, starting from `init` when given.
fn solve_level(p: &FdProblem, cells: usize, init: Option<&FdGrid>) -> Result<FdGrid> {
    let n = cells + 1;
    let h = 2.0 * p.half_width / cells as f64;
    let origin = Vec2::new(-p.half_width, -p.half_width);
    let pt = |i: usize, j: usize| origin + Vec2::new(i as f64 * h, j as f64 * h);
    let inside: Vec<bool> = (0..n * n).into_par_iter().map(|k| p.geometry.contains(pt(k % n, k / n))).collect();
    let mut values = vec![0.0; n * n];
    // 0: fixed or inside, 1: regular 5-point node, 2: node with a cut arm
    let mut class = vec![0u8; n * n];
    let mut cut: Vec<(usize, Stencil)> = Vec::new();
    let mut cut_index = vec![usize::MAX; n * n];
    for k in 0..n * n {
        let (i, j) = (k % n, k / n);
        if inside[k] {
            values[k] = f64::NAN;
            continue;
        }
        if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
            values[k] = (p.box_data)(pt(i, j));
            continue;
        }
        let x0 = pt(i, j);
        let nbrs = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)];
        if nbrs.iter().all(|&(ni, nj)| !inside[nj * n + ni]) {
            class[k] = 1;
            continue;
        }
        let mut arms_h = [h; 4];
        let mut fixed = [None; 4];
        for (a, &(ni, nj)) in nbrs.iter().enumerate() {
            let kk = nj * n + ni;
            if inside[kk] {
                let c = crossing(p.geometry, pt(ni, nj), x0);
                arms_h[a] = c.dist(x0).max(1e-6 * h);
                fixed[a] = Some((p.inclusion_data)(c, component_of(p.geometry, c)));
            }
        }
        let (he, hw, hn, hs) = (arms_h[0], arms_h[1], arms_h[2], arms_h[3]);
        let coef = [2.0 / (he * (he + hw)), 2.0 / (hw * (he + hw)), 2.0 / (hn * (hn + hs)), 2.0 / (hs * (hn + hs))];
        let arms = [0, 1, 2, 3].map(|a| {
            let (ni, nj) = nbrs[a];
            let arm = match fixed[a] {
                Some(v) => Arm::Fixed(v),
                None => Arm::Node(nj * n + ni),
            };
            (coef[a], arm)
        });
        class[k] = 2;
        cut_index[k] = cut.len();
        cut.push((k, Stencil { arms, diag: coef.iter().sum() }));
    }
    // initial guess
    if let Some(c) = init {
        for k in 0..n * n {
            if class[k] != 0 {
                values[k] = interpolate(c, pt(k % n, k / n)).unwrap_or(0.0);
            }
        }
    }
    let scale = values.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let omega = 2.0 / (1.0 + (PI / cells as f64).sin());
    let tol = 1e-2 * h * h * h * scale;
    let max_sweeps = 40 * cells + 2000;
    let mut sweeps = 0;
    loop {
        let mut max_delta = 0.0f64;
        for colour in 0..2 {
            for j in 1..n - 1 {
                let start = 1 + (j + colour + 1) % 2;
                for i in (start..n - 1).step_by(2) {
                    let k = j * n + i;
                    let target = match class[k] {
                        1 => 0.25 * (values[k + 1] + values[k - 1] + values[k + n] + values[k - n]),
                        2 => {
                            let s = &cut[cut_index[k]].1;
                            let mut acc = 0.0;
                            for (c, arm) in &s.arms {
                                acc += c * match arm {
                                    Arm::Node(m) => values[*m],
                                    Arm::Fixed(v) => *v,
                                };
                            }
                            acc / s.diag
                        }
                        _ => continue,
                    };
                    let d = omega * (target - values[k]);
                    values[k] += d;
                    max_delta = max_delta.max(d.abs());
                }
            }
        }
        sweeps += 1;
        if max_delta < tol || sweeps >= max_sweeps {
            break;
        }
    }
    Ok(FdGrid { nx: n, ny: n, h, origin, values, sweeps })
}

/// Bilinear interpolation; `None` if any corner value is missing.
pub fn interpolate(g: &FdGrid, x: Vec2) -> Option<f64> {
    let fx = (x.x - g.origin.x) / g.h;
    let fy = (x.y - g.origin.y) / g.h;
    if fx < 0.0 || fy < 0.0 {
        return None;
    }
    let i = (fx.floor() as usize).min(g.nx - 2);
    let j = (fy.floor() as usize).min(g.ny - 2);
    let (tx, ty) = (fx - i as f64, fy - j as f64);
    let v = (1.0 - tx) * (1.0 - ty) * g.value(i, j)
        + tx * (1.0 - ty) * g.value(i + 1, j)
        + (1.0 - tx) * ty * g.value(i, j + 1)
        + tx * ty * g.value(i + 1, j + 1);
    v.is_finite().then_some(v)
}

/// Nested-iteration solve up to `cells` intervals per side (a power of two times 16).
pub fn fd_reference_solve(p: &FdProblem, cells: usize) -> Result<FdGrid> {
    if cells < 16 || cells > MAX_CELLS || cells % 16 != 0 {
        return Err(BowtieError::InvalidConfig(format!("grid size {cells} must be a multiple of 16 in [16, {MAX_CELLS}]")));
    }
    if !(p.half_width > 0.0) {
        return Err(BowtieError::InvalidConfig("box half width must be positive".into()));
    }
    let mut level = cells;
    let mut sizes = vec![cells];
    while level % 2 == 0 && level / 2 >= 32 {
        level /= 2;
        sizes.push(level);
    }
    sizes.reverse();
    let mut grid: Option<FdGrid> = None;
    for s in sizes {
        grid = Some(crate::parallel::install(|| solve_level(p, s, grid.as_ref()))?);
    }
    Ok(grid.expect("at least one level"))
}

/// Largest 5-point Laplacian of `N(x - p0)` over grid points at distance at least
/// `clearance` from `p0` inside the box `[-1, 1]^2`.
pub fn newton_laplacian_residual(p0: Vec2, h: f64, clearance: f64) -> f64 {
    let n = (2.0 / h).round() as i64;
    let f = |x: Vec2| (x - p0).norm().ln() / (2.0 * PI);
    let mut worst = 0.0f64;
    for j in 1..n {
        for i in 1..n {
            let x = Vec2::new(-1.0 + i as f64 * h, -1.0 + j as f64 * h);
            if x.dist(p0) < clearance {
                continue;
            }
            let lap = (f(x + Vec2::new(h, 0.0)) + f(x - Vec2::new(h, 0.0)) + f(x + Vec2::new(0.0, h))
                + f(x - Vec2::new(0.0, h))
                - 4.0 * f(x))
                / (h * h);
            worst = worst.max(lap.abs());
        }
    }
    worst
}
