//! Point charges inside the inclusions give an exact exterior field; the solver
//! reproduces it down to `1e-3 eps` from the vertex.

use bowtie::bie::{solve_on_mesh, SolverOptions};
use bowtie::fields::eval_gradient;
use bowtie::geometry::{BowtieConfig, PanelMesh};
use bowtie::oracles::manufactured::ManufacturedSolution;
use bowtie::Vec2;
use std::sync::Arc;

fn main() -> bowtie::Result<()> {
    for eps in [0.1, 0.01, 0.001] {
        let config = BowtieConfig::new(std::f64::consts::FRAC_PI_2, eps);
        let mesh = Arc::new(PanelMesh::build(&config)?);
        let m = ManufacturedSolution::new(&mesh, vec![(Vec2::new(-0.7, 0.1), 2.0), (Vec2::new(0.5, 0.0), -1.0), (Vec2::new(0.9, -0.2), -1.0)])?;
        let sol = solve_on_mesh(mesh, &m.problem(), &SolverOptions::default())?;
        let mut worst = 0.0f64;
        for k in 0..13 {
            let r = eps * 10f64.powf(-3.0 + 0.25 * k as f64);
            let x = config.vertex(2) + Vec2::new(-r, 0.0);
            worst = worst.max((eval_gradient(&sol, x)? - m.gradient(x)).norm());
        }
        println!("eps = {eps:<6} residual {:.1e}, max gradient error on the bisector {worst:.2e}", sol.residual);
    }
    Ok(())
}
