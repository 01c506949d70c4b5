//! Compare the boundary-integral solver with the exact image solution for a
//! floating disk next to a dipole. Meshes coarser than about ten panel lengths of
//! clearance from the emitter are rejected by the solver.

use bowtie::analytic::DipoleSpec;
use bowtie::bie::{solve_on_mesh, ProblemKind, SolverOptions};
use bowtie::fields::eval_gradient;
use bowtie::geometry::PanelMesh;
use bowtie::oracles::disk::DiskProblem;
use bowtie::Vec2;
use std::sync::Arc;

fn main() -> bowtie::Result<()> {
    let disk = DiskProblem::new(Vec2::new(0.0, 0.0), 1.0, Vec2::new(1.0, 1.0), Vec2::new(1.5, 0.3))?;
    let (zs, b) = disk.image();
    println!("image dipole ({:.6}, {:.6}) at ({:.6}, {:.6}); disk potential {:.6}", b.x, b.y, zs.x, zs.y, disk.boundary_constant());
    for panels in [128usize, 192, 256] {
        let mesh = Arc::new(PanelMesh::circle(disk.center, disk.radius, panels, 8)?);
        let kind = ProblemKind::SingleInclusion(DipoleSpec::at(disk.direction, disk.location));
        let sol = solve_on_mesh(mesh, &kind, &SolverOptions::default())?;
        let mut worst = 0.0f64;
        for k in 0..64 {
            let x = Vec2::from_angle(2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 64.0) * 1.3;
            let exact = disk.image_solution(x)?.1;
            worst = worst.max((eval_gradient(&sol, x)? - exact).norm() / exact.norm());
        }
        println!("{panels:4} panels: constant {:.12}, max relative gradient error {worst:.2e}", sol.constants[0]);
    }
    Ok(())
}
