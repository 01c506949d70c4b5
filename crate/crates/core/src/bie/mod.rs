//! Exterior Laplace problems around perfect conductors, solved with a
//! single-layer representation plus one floating constant per component.
//!
//! Unknowns are the nodal charges `rho_j w_j` followed by the constants. Each
//! collocation row imposes the Dirichlet condition at a Gauss node; each extra
//! row fixes the net charge of one component (or of the whole boundary for the
//! Dirichlet-data problems).

mod layer;
mod linalg;

pub use layer::{panel_weights, Kernel, NEAR_FACTOR};
pub use linalg::{solve_dense, DenseSolution};

use crate::analytic::DipoleSpec;
use crate::error::{BowtieError, Result};
use crate::geometry::{BowtieConfig, Layout, PanelMesh};
use crate::vec2::Vec2;
use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Boundary-value problem to solve outside the inclusions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemKind {
    /// Dipole emitter, floating potentials, zero net flux per component.
    Emitter(DipoleSpec),
    /// Floating potentials with fluxes `-1` on component 1 and `+1` on component 2.
    CapacityQ,
    /// Trace equals `a . grad N` plus a free constant; finite energy.
    AuxiliaryV(DipoleSpec),
    /// Uniform background field `a . X`, floating potentials, zero net flux.
    BackgroundLinear { direction: Vec2 },
    /// Dipole emitter near a single inclusion.
    SingleInclusion(DipoleSpec),
    /// Trace equals `sum_i c_i N(x - p_i)` plus a free constant.
    PointCharges { charges: Vec<(Vec2, f64)> },
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Emitter(_) => "emitter",
            ProblemKind::CapacityQ => "capacity_q",
            ProblemKind::AuxiliaryV(_) => "auxiliary_v",
            ProblemKind::BackgroundLinear { .. } => "background_linear",
            ProblemKind::SingleInclusion(_) => "single_inclusion",
            ProblemKind::PointCharges { .. } => "point_charges",
        }
    }

    /// True for problems whose trace is a floating constant per component.
    pub fn has_floating_constants(&self) -> bool {
        matches!(
            self,
            ProblemKind::Emitter(_)
                | ProblemKind::CapacityQ
                | ProblemKind::BackgroundLinear { .. }
                | ProblemKind::SingleInclusion(_)
        )
    }

    pub fn dipole(&self) -> Option<&DipoleSpec> {
        match self {
            ProblemKind::Emitter(d) | ProblemKind::AuxiliaryV(d) | ProblemKind::SingleInclusion(d) => Some(d),
            _ => None,
        }
    }

    /// Free-space part added to the layer potential.
    pub fn particular(&self, x: Vec2) -> Result<f64> {
        match self {
            ProblemKind::Emitter(d) | ProblemKind::SingleInclusion(d) => d.potential(x),
            ProblemKind::BackgroundLinear { direction } => Ok(direction.dot(x)),
            _ => Ok(0.0),
        }
    }

    pub fn particular_gradient(&self, x: Vec2) -> Result<Vec2> {
        match self {
            ProblemKind::Emitter(d) | ProblemKind::SingleInclusion(d) => d.gradient(x),
            ProblemKind::BackgroundLinear { direction } => Ok(*direction),
            _ => Ok(Vec2::ZERO),
        }
    }

    /// Dirichlet data for the data-driven problems.
    pub fn boundary_data(&self, x: Vec2) -> Result<f64> {
        match self {
            ProblemKind::AuxiliaryV(d) => d.potential(x),
            ProblemKind::PointCharges { charges } => {
                let mut s = 0.0;
                for (p, c) in charges {
                    s += c * crate::analytic::newton_potential(x, *p)?;
                }
                Ok(s)
            }
            _ => Ok(0.0),
        }
    }

    /// Prescribed value of `\int rho` on each component (floating problems).
    fn charge_targets(&self, n_components: usize) -> Vec<f64> {
        match self {
            // d_nu q = -rho, fluxes -1 and +1
            ProblemKind::CapacityQ => vec![1.0, -1.0],
            _ => vec![0.0; n_components],
        }
    }
}

/// Problem kind together with the geometry it is posed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub geometry: BowtieConfig,
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, geometry: BowtieConfig) -> Self {
        ProblemSpec { kind, geometry }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        let single = self.geometry.layout == Layout::Single;
        match (&self.kind, single) {
            (ProblemKind::SingleInclusion(_), false) => Err(BowtieError::ProblemMismatch(
                "single-inclusion problem needs the single-inclusion layout".into(),
            )),
            (ProblemKind::Emitter(_) | ProblemKind::CapacityQ | ProblemKind::BackgroundLinear { .. }, true) => Err(
                BowtieError::ProblemMismatch(format!("{} problem needs both inclusions", self.kind.name())),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Largest accepted relative backward error.
    pub residual_tolerance: f64,
    /// Largest accepted condition-number estimate.
    pub max_condition: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { residual_tolerance: 1e-12, max_condition: 1e14 }
    }
}

/// Assembled dense system.
pub struct LinearSystem {
    pub matrix: Mat<f64>,
    pub rhs: Vec<f64>,
    pub n_nodes: usize,
    pub n_constants: usize,
}

fn validate_mesh_for(mesh: &PanelMesh, kind: &ProblemKind) -> Result<()> {
    if matches!(kind, ProblemKind::CapacityQ) && mesh.n_components() != 2 {
        return Err(BowtieError::ProblemMismatch("capacity problem needs exactly two components".into()));
    }
    if let Some(d) = kind.dipole() {
        mesh.check_source_clearance(d.location)?;
    }
    if let ProblemKind::PointCharges { charges } = kind {
        for (p, _) in charges {
            if !mesh.contains(*p) {
                return Err(BowtieError::InvalidConfig(format!(
                    "charge at ({}, {}) is not inside an inclusion",
                    p.x, p.y
                )));
            }
        }
    }
    Ok(())
}

/// Assemble the dense system for `kind` on `mesh`.
pub fn assemble(mesh: &PanelMesh, kind: &ProblemKind) -> Result<LinearSystem> {
    validate_mesh_for(mesh, kind)?;
    let n = mesh.n_nodes();
    let q = mesh.order;
    let floating = kind.has_floating_constants();
    let m = if floating { mesh.n_components() } else { 1 };
    let size = n + m;
    let rows: Vec<Vec<f64>> = crate::parallel::install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let x = mesh.node(i);
                let pi = i / q;
                let mut row = vec![0.0; size];
                let mut buf = vec![vec![0.0; q]];
                for (p, panel) in mesh.panels.iter().enumerate() {
                    buf[0].iter_mut().for_each(|v| *v = 0.0);
                    let self_node = if p == pi { Some(i % q) } else { None };
                    panel_weights(panel, x, Kernel::Potential, self_node, &mut buf);
                    for j in 0..q {
                        // unknowns are charges rho_j w_j
                        row[p * q + j] = buf[0][j] / panel.weights[j];
                    }
                }
                if floating {
                    row[n + mesh.component_of_node(i)] = -1.0;
                } else {
                    row[n] = 1.0;
                }
                row
            })
            .collect()
    });
    let mut matrix = Mat::<f64>::zeros(size, size);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            matrix[(i, j)] = *v;
        }
    }
    let mut rhs = vec![0.0; size];
    for (i, r) in rhs.iter_mut().enumerate().take(n) {
        let x = mesh.node(i);
        *r = if floating { -kind.particular(x)? } else { kind.boundary_data(x)? };
    }
    if floating {
        let targets = kind.charge_targets(m);
        for c in 0..m {
            for p in mesh.components[c].panels.clone() {
                for j in 0..q {
                    matrix[(n + c, p * q + j)] = 1.0;
                }
            }
            rhs[n + c] = targets[c];
        }
    } else {
        for j in 0..n {
            matrix[(n, j)] = 1.0;
        }
    }
    Ok(LinearSystem { matrix, rhs, n_nodes: n, n_constants: m })
}

/// Solution of one boundary-value problem.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub kind: ProblemKind,
    pub mesh: Arc<PanelMesh>,
    /// Layer density at the mesh nodes.
    pub density: Vec<f64>,
    /// Boundary constants per component; a single value at infinity for the
    /// Dirichlet-data problems.
    pub constants: Vec<f64>,
    /// `\int d_nu u ds` per component with `nu` pointing into the inclusion.
    pub fluxes: Vec<f64>,
    pub residual: f64,
    pub condition_estimate: f64,
}

/// JSON summary of a solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSummary {
    pub constants: Vec<f64>,
    pub fluxes: Vec<f64>,
    pub residual: f64,
    pub condition_estimate: f64,
    pub mesh_hash: String,
    pub n_nodes: usize,
    pub spec: ProblemKind,
}

impl SolveResult {
    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            constants: self.constants.clone(),
            fluxes: self.fluxes.clone(),
            residual: self.residual,
            condition_estimate: self.condition_estimate,
            mesh_hash: self.mesh.hash(),
            n_nodes: self.mesh.n_nodes(),
            spec: self.kind.clone(),
        }
    }

    /// Boundary constant of the component with label `label`.
    pub fn constant(&self, label: usize) -> f64 {
        let idx = self.mesh.components.iter().position(|c| c.label == label).expect("no such component");
        if self.constants.len() == 1 {
            self.constants[0]
        } else {
            self.constants[idx]
        }
    }
}

/// Solve an assembled system.
pub fn solve(mesh: Arc<PanelMesh>, kind: &ProblemKind, system: &LinearSystem, opts: &SolverOptions) -> Result<SolveResult> {
    let sol = solve_dense(&system.matrix, &system.rhs, opts.max_condition)?;
    if !(sol.residual <= opts.residual_tolerance) {
        return Err(BowtieError::Solve(format!("residual {:.3e} above tolerance", sol.residual)));
    }
    let n = system.n_nodes;
    let q = mesh.order;
    let mut density = vec![0.0; n];
    let mut fluxes = vec![0.0; mesh.n_components()];
    for (p, panel) in mesh.panels.iter().enumerate() {
        for j in 0..q {
            let charge = sol.x[p * q + j];
            density[p * q + j] = charge / panel.weights[j];
            fluxes[panel.component] -= charge;
        }
    }
    let constants = sol.x[n..].to_vec();
    Ok(SolveResult {
        kind: kind.clone(),
        mesh,
        density,
        constants,
        fluxes,
        residual: sol.residual,
        condition_estimate: sol.condition_estimate,
    })
}

/// Assemble and solve on a prebuilt mesh.
pub fn solve_on_mesh(mesh: Arc<PanelMesh>, kind: &ProblemKind, opts: &SolverOptions) -> Result<SolveResult> {
    let system = assemble(&mesh, kind)?;
    solve(mesh, kind, &system, opts)
}

/// Build the mesh for `spec.geometry`, then assemble and solve.
pub fn solve_problem(spec: &ProblemSpec, opts: &SolverOptions) -> Result<SolveResult> {
    spec.validate()?;
    let mesh = Arc::new(PanelMesh::build(&spec.geometry)?);
    solve_on_mesh(mesh, &spec.kind, opts)
}
