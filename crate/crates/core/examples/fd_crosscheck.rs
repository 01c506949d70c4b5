//! Finite-difference cross-check of the regular part `u - a . grad N` for Case 2.
//!
//! Argument: largest grid size (default 512 cells per side).

use bowtie::analytic::DipoleSpec;
use bowtie::bie::{solve_on_mesh, ProblemKind, SolverOptions};
use bowtie::fields::eval_potential;
use bowtie::geometry::{BowtieConfig, PanelMesh};
use bowtie::oracles::fd::{fd_reference_solve, interpolate, FdProblem};
use bowtie::Vec2;
use std::sync::Arc;

fn main() -> bowtie::Result<()> {
    let max_cells: usize = std::env::args().nth(1).map_or(512, |s| s.parse().expect("cells"));
    let eps = 0.1;
    let geometry = BowtieConfig::new(std::f64::consts::FRAC_PI_2, eps);
    let mesh = Arc::new(PanelMesh::build(&geometry)?);
    let dip = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.0, eps);
    let u = solve_on_mesh(mesh.clone(), &ProblemKind::Emitter(dip), &SolverOptions::default())?;
    let regular = |x: Vec2| eval_potential(&u, x).unwrap() - dip.potential(x).unwrap();
    let inclusion = |x: Vec2, c: usize| u.constant(c) - dip.potential(x).unwrap();
    let problem = FdProblem { geometry: &geometry, inclusion_data: &inclusion, box_data: &regular, half_width: 0.5 };
    let mut cells = 128;
    while cells <= max_cells {
        let grid = fd_reference_solve(&problem, cells)?;
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for j in 0..21 {
            for i in 0..21 {
                let x = Vec2::new(-0.45 + 0.045 * i as f64, -0.45 + 0.045 * j as f64);
                let far = x.dist(geometry.vertex(1)).min(x.dist(geometry.vertex(2))) >= 0.2 * eps;
                if x.norm() < 1e-9 || mesh.contains(x) || !far || mesh.nearest_panel(x).1 < 5.0 * grid.h {
                    continue;
                }
                if let Some(f) = interpolate(&grid, x) {
                    let b = regular(x);
                    worst = worst.max((f - b).abs());
                    scale = scale.max(b.abs());
                }
            }
        }
        println!("{cells:5} cells: {} sweeps, max relative difference {:.3e}", grid.sweeps, worst / scale);
        cells *= 2;
    }
    Ok(())
}
