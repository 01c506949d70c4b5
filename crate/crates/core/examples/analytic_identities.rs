//! Corner exponents, the singular function `B_j`, the angle function and the
//! extremal construction for a vertical dipole.

use bowtie::analytic::{extremal_boundary_points, Exponents};
use bowtie::experiments::{angle_gradient_identity, corner_gradient_identity};
use std::f64::consts::PI;

fn main() -> bowtie::Result<()> {
    for alpha in [PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let e = Exponents::new(alpha);
        let (phi_err, n) = angle_gradient_identity(alpha)?;
        println!(
            "alpha = {alpha:.4}: beta = {:.6}, gamma = {:.6}, max | |grad B| / (beta r^(beta-1)) - 1 | = {:.2e}, \
             max | |grad phi| |Y-Q| - 1 | = {phi_err:.2e} over {n} points",
            e.beta,
            e.gamma,
            corner_gradient_identity(alpha, 2)?
        );
    }
    let ext = extremal_boundary_points(PI / 2.0, 0.5, 0.01)?;
    println!(
        "extremes of d2 N on the edges (eps = 0.01, p = 0.5): max {:.6} at ({:.5}, {:.5}), min {:.6} at ({:.5}, {:.5})",
        ext.max_value, ext.max_points[1].x, ext.max_points[1].y, ext.min_value, ext.min_points[1].x, ext.min_points[1].y
    );
    println!("maximal level circle: centre ({:.5}, {:.5}), radius {:.5}", ext.max_circle.center.x, ext.max_circle.center.y, ext.max_circle.radius);
    Ok(())
}
