use super::fit::fit_exponent;
use super::report::CheckRecord;
use crate::analytic::{angle_centre, angle_phi, grad_angle_phi, grad_corner_singular_b, DipoleSpec, Exponents};
use crate::bie::{solve_on_mesh, ProblemKind, SolverOptions};
use crate::error::Result;
use crate::fields::eval_gradient;
use crate::geometry::{check_condition_a, BowtieConfig, CornerChart, PanelMesh};
use crate::oracles::disk::DiskProblem;
use crate::oracles::manufactured::ManufacturedSolution;
use crate::vec2::Vec2;
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest relative deviation of `|grad B_j|` from `beta r^(beta-1)` on a polar grid.
pub fn corner_gradient_identity(alpha: f64, vertex_id: usize) -> Result<f64> {
    let chart = CornerChart::scaled(vertex_id, alpha);
    let beta = chart.beta();
    let mut worst = 0.0f64;
    for i in 0..40 {
        let r = 10f64.powf(-3.0 + 4.0 * i as f64 / 39.0);
        for k in 0..25 {
            let th = chart.opening() * (k as f64 + 0.5) / 25.0;
            let y = chart.point(r, th);
            let g = grad_corner_singular_b(y, &chart)?.norm();
            worst = worst.max((g / (beta * r.powf(beta - 1.0)) - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Largest `| |grad phi| |Y - Q| - 1 |` over exterior grid points.
pub fn angle_gradient_identity(alpha: f64) -> Result<(f64, usize)> {
    let q = angle_centre(alpha);
    let mut worst = 0.0f64;
    let mut count = 0;
    for j in 0..60 {
        for i in 0..60 {
            let y = Vec2::new(-3.0 + 6.0 * (i as f64 + 0.5) / 60.0, -3.0 + 6.0 * (j as f64 + 0.37) / 60.0);
            if angle_phi(y, alpha).is_err() {
                continue;
            }
            let qm = if y.y < 0.0 { q.mirror_y() } else { q };
            let d = y.dist(qm);
            if d < 1e-3 {
                continue;
            }
            worst = worst.max((grad_angle_phi(y, alpha)?.norm() * d - 1.0).abs());
            count += 1;
        }
    }
    Ok((worst, count))
}

fn disk_checks(out: &mut Vec<CheckRecord>) -> Result<()> {
    let disk = DiskProblem::new(Vec2::new(0.2, -0.1), 0.7, Vec2::new(0.6, 0.8), Vec2::new(1.3, 0.4))?;
    let mut series = 0.0f64;
    let mut n = 0;
    for i in 0..40 {
        for k in 0..25 {
            let r = disk.radius * (1.1 + 3.0 * i as f64 / 39.0);
            let x = disk.center + Vec2::from_angle(2.0 * PI * (k as f64 + 0.5) / 25.0) * r;
            if x.dist(disk.location) < 0.05 {
                continue;
            }
            let (u0, g0) = disk.image_solution(x)?;
            let (u1, g1) = disk.series_solution(x, 400)?;
            series = series.max(((u0 - u1).abs() + (g0 - g1).norm()) / (1.0 + g0.norm()));
            n += 1;
        }
    }
    out.push(CheckRecord::at_most("disk_image_vs_series", None, series, 1e-12, format!("{n} points")));

    let mesh = Arc::new(PanelMesh::circle(disk.center, disk.radius, 256, 8)?);
    let kind = ProblemKind::SingleInclusion(DipoleSpec::at(disk.direction, disk.location));
    let sol = solve_on_mesh(mesh, &kind, &SolverOptions::default())?;
    let mut worst = 0.0f64;
    let mut n = 0;
    for i in 0..10 {
        for k in 0..20 {
            let r = disk.radius * (1.1 + 2.0 * i as f64 / 9.0);
            let x = disk.center + Vec2::from_angle(2.0 * PI * (k as f64 + 0.5) / 20.0) * r;
            if x.dist(disk.location) < 0.1 * disk.radius {
                continue;
            }
            let exact = disk.image_solution(x)?.1;
            worst = worst.max((eval_gradient(&sol, x)? - exact).norm() / exact.norm());
            n += 1;
        }
    }
    out.push(CheckRecord::at_most("disk_bie_gradient", None, worst, 1e-8, format!("{n} points, relative")));
    Ok(())
}

fn manufactured_check(out: &mut Vec<CheckRecord>) -> Result<()> {
    let cfg = BowtieConfig::new(PI / 2.0, 0.1);
    let mesh = Arc::new(PanelMesh::build(&cfg)?);
    let m = ManufacturedSolution::new(&mesh, vec![(Vec2::new(-0.6, 0.05), 1.0), (Vec2::new(0.45, -0.03), -1.0)])?;
    let sol = solve_on_mesh(mesh.clone(), &m.problem(), &SolverOptions::default())?;
    let mut worst = 0.0f64;
    let mut n = 0;
    for i in 0..12 {
        let r = cfg.epsilon * 10f64.powf(-3.0 + 3.0 * i as f64 / 11.0);
        let x = cfg.vertex(2) + Vec2::new(-r, 0.0);
        worst = worst.max((eval_gradient(&sol, x)? - m.gradient(x)).norm());
        n += 1;
    }
    for k in 0..48 {
        let x = Vec2::from_angle(2.0 * PI * (k as f64 + 0.5) / 48.0) * 0.8;
        if mesh.contains(x) {
            continue;
        }
        worst = worst.max((eval_gradient(&sol, x)? - m.gradient(x)).norm());
        n += 1;
    }
    out.push(CheckRecord::at_most("manufactured_field", None, worst, 1e-7, format!("{n} points, absolute")));
    Ok(())
}

/// Analytic identities and oracle comparisons, one record per check.
pub fn validation_suite() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let e = Exponents::new(PI / 2.0);
    out.push(CheckRecord::at_most(
        "exponents_right_angle",
        None,
        (e.beta - 2.0 / 3.0).abs().max((e.gamma - 2.0).abs()),
        1e-15,
        format!("beta = {}, gamma = {}", e.beta, e.gamma),
    ));
    for alpha in [PI / 2.0, 0.3 * PI, 0.8 * PI] {
        for v in [1, 2] {
            out.push(CheckRecord::at_most(
                "corner_gradient_identity",
                None,
                corner_gradient_identity(alpha, v)?,
                1e-12,
                format!("alpha = {alpha:.6}, vertex {v}, 1000 points"),
            ));
        }
        let (w, n) = angle_gradient_identity(alpha)?;
        out.push(CheckRecord::at_most("angle_gradient_identity", None, w, 1e-12, format!("alpha = {alpha:.6}, {n} points")));
    }
    let holds = check_condition_a(PI / 2.0, 0.5)?;
    let fails = check_condition_a(0.9 * PI, 0.1)?;
    out.push(CheckRecord::at_most(
        "condition_a_examples",
        None,
        (!holds.holds as u8 + fails.holds as u8) as f64,
        0.0,
        "holds at (pi/2, 0.5), fails at (0.9 pi, 0.1)".into(),
    ));
    let x: Vec<f64> = (0..20).map(|k| 10f64.powf(-3.0 + k as f64 / 19.0 * 2.0)).collect();
    let y: Vec<f64> = x.iter().map(|r| r.powf(-1.0 / 3.0)).collect();
    let f = fit_exponent(&x, &y, None)?;
    out.push(CheckRecord::at_most("synthetic_fit", None, (f.slope + 1.0 / 3.0).abs(), 1e-12, "y = r^(-1/3)".into()));
    disk_checks(&mut out)?;
    manufactured_check(&mut out)?;
    Ok(out)
}
