use bowtie::analytic::{dipole_potential, DipoleSpec};
use bowtie::bie::*;
use bowtie::fields::{eval_gradient, eval_potential, normal_derivative_on_boundary};
use bowtie::geometry::{BowtieConfig, PanelMesh};
use bowtie::oracles::disk::DiskProblem;
use bowtie::oracles::manufactured::ManufacturedSolution;
use bowtie::oracles::{disk_report, manufactured_report};
use bowtie::Vec2;
use std::f64::consts::PI;
use std::sync::Arc;

fn mesh(alpha: f64, eps: f64) -> Arc<PanelMesh> {
    Arc::new(PanelMesh::build(&BowtieConfig::new(alpha, eps)).unwrap())
}

fn solve(m: &Arc<PanelMesh>, kind: ProblemKind) -> SolveResult {
    solve_on_mesh(m.clone(), &kind, &SolverOptions::default()).unwrap()
}

/// Exterior points in an annulus about the origin, on a fixed polar grid.
fn exterior_ring(m: &PanelMesh, r0: f64, r1: f64, nr: usize, na: usize) -> Vec<Vec2> {
    let mut pts = Vec::new();
    for i in 0..nr {
        let r = r0 * (r1 / r0).powf(i as f64 / (nr - 1).max(1) as f64);
        for k in 0..na {
            let x = Vec2::from_angle(2.0 * PI * (k as f64 + 0.3) / na as f64) * r;
            if !m.contains(x) && m.nearest_panel(x).1 > 1e-9 {
                pts.push(x);
            }
        }
    }
    pts
}

#[test]
fn capacity_function_fluxes_constants_and_signs() {
    let m = mesh(PI / 2.0, 0.05);
    let q = solve(&m, ProblemKind::CapacityQ);
    assert!((q.fluxes[0] + 1.0).abs() < 1e-8 && (q.fluxes[1] - 1.0).abs() < 1e-8, "{:?}", q.fluxes);
    let (l1, l2) = (q.constant(1), q.constant(2));
    assert!(l1 < 0.0 && l2 > 0.0);
    assert!((l1 + l2).abs() < 1e-10);
    // maximum principle at 1000 exterior points
    let pts = exterior_ring(&m, 0.03, 8.0, 50, 40);
    assert!(pts.len() >= 1000, "{}", pts.len());
    for x in pts {
        let v = eval_potential(&q, x).unwrap();
        assert!(v >= l1 - 1e-10 && v <= l2 + 1e-10, "q({x:?}) = {v}");
    }
}

#[test]
fn hopf_sign_of_the_capacity_flux() {
    let eps = 0.02;
    let m = mesh(PI / 2.0, eps);
    let q = solve(&m, ProblemKind::CapacityQ);
    let mut checked = 0;
    for i in 0..m.n_nodes() {
        if m.arc_coordinate(i) <= 0.01 * eps {
            continue;
        }
        let label = m.components[m.component_of_node(i)].label;
        let s = if label == 2 { 1.0 } else { -1.0 };
        assert!(s * normal_derivative_on_boundary(&q, i).unwrap() > 0.0, "node {i}");
        checked += 1;
    }
    assert!(checked > 1000);
}

#[test]
fn vertex_adjacent_nodes_are_flagged() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let q = solve(&m, ProblemKind::CapacityQ);
    let i = (0..m.n_nodes()).find(|&i| m.arc_coordinate(i) < 0.001 * eps).unwrap();
    assert!(normal_derivative_on_boundary(&q, i).is_err());
}

#[test]
fn case1_constants_are_skew_and_fluxes_vanish() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let u = solve(&m, ProblemKind::Emitter(DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps)));
    assert!((u.constant(1) + u.constant(2)).abs() < 1e-10);
    assert!(u.constant(2) > 0.0);
    assert!(u.fluxes.iter().all(|f| f.abs() < 1e-10));
    // re-integrate the boundary normal derivative; vertex-adjacent nodes are
    // refused by the evaluator, so their share comes straight from the density
    for label in [1, 2] {
        let c = m.components.iter().position(|c| c.label == label).unwrap();
        let mut total = 0.0;
        for i in 0..m.n_nodes() {
            if m.component_of_node(i) == c {
                let d = normal_derivative_on_boundary(&u, i).unwrap_or(-u.density[i]);
                total += m.weight(i) * d;
            }
        }
        assert!(total.abs() < 1e-7, "flux {total}");
    }
}

#[test]
fn case2_constants_vanish_and_potential_is_odd() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let dip = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.0, eps);
    let u = solve(&m, ProblemKind::Emitter(dip));
    assert!(u.constant(1).abs() < 1e-10 && u.constant(2).abs() < 1e-10);
    let v = solve(&m, ProblemKind::AuxiliaryV(dip));
    // mirrored node pairs
    let key = |x: Vec2| ((x.x * 1e10).round() as i64, (x.y * 1e10).round() as i64);
    let index: std::collections::HashMap<_, _> = (0..m.n_nodes()).map(|i| (key(m.node(i)), i)).collect();
    let mut pairs = 0;
    for i in 0..m.n_nodes() {
        if let Some(&j) = index.get(&key(m.node(i).mirror_y())) {
            if i != j {
                let xi = m.node(i) + m.normal(i) * (-1e-3);
                let xj = m.node(j) + m.normal(j) * (-1e-3);
                let sum = eval_potential(&v, xi).unwrap() + eval_potential(&v, xj).unwrap();
                if pairs < 200 {
                    assert!(sum.abs() < 1e-10, "pair ({i}, {j}): {sum}");
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs > 100);
}

#[test]
fn case3_has_no_potential_difference() {
    let eps = 0.02;
    let m = mesh(PI / 2.0, eps);
    let u = solve(&m, ProblemKind::Emitter(DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.5, eps)));
    assert!((u.constant(2) - u.constant(1)).abs() < 1e-10);
}

#[test]
fn disk_problem_matches_image_oracle() {
    let disk = DiskProblem::new(Vec2::new(0.3, 0.1), 0.5, Vec2::new(-0.2, 1.0), Vec2::new(0.3, 0.75)).unwrap();
    let m = Arc::new(PanelMesh::circle(disk.center, disk.radius, 256, 8).unwrap());
    let u = solve(&m, ProblemKind::SingleInclusion(DipoleSpec::at(disk.direction, disk.location)));
    assert!((u.constants[0] - disk.boundary_constant()).abs() < 1e-10);
    let samples: Vec<Vec2> = (0..200)
        .map(|k| disk.center + Vec2::from_angle(0.61 * k as f64) * (disk.radius * (1.1 + 0.01 * k as f64)))
        .filter(|x| x.dist(disk.location) >= 0.1 * disk.radius)
        .collect();
    let rep = disk_report(&disk, &u, &samples).unwrap();
    assert!(rep.sample_count >= 100);
    assert!(rep.max_rel_error < 1e-8, "{rep:?}");
}

#[test]
fn manufactured_two_charges_reproduced_at_500_points() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let ms = ManufacturedSolution::new(&m, vec![(Vec2::new(-0.5, 0.02), 1.0), (Vec2::new(0.7, -0.05), -1.0)]).unwrap();
    let u = solve(&m, ms.problem());
    assert!(u.residual < 1e-10);
    let pts = exterior_ring(&m, 0.04, 6.0, 40, 30);
    let pts: Vec<Vec2> = pts.into_iter().filter(|x| m.nearest_panel(*x).1 > 1e-3).take(500).collect();
    assert_eq!(pts.len(), 500);
    let rep = manufactured_report(&ms, &u, &pts).unwrap();
    assert!(rep.max_abs_error < 1e-8, "{rep:?}");
}

#[test]
fn manufactured_single_inclusion_near_vertex() {
    let eps = 0.01;
    let cfg = BowtieConfig::single(PI / 2.0, eps);
    let m = Arc::new(PanelMesh::build(&cfg).unwrap());
    let ms = ManufacturedSolution::new(&m, vec![(Vec2::new(-0.4, 0.05), 1.0), (Vec2::new(-0.4, -0.05), -1.0)]).unwrap();
    let u = solve(&m, ms.problem());
    let v1 = cfg.vertex(1);
    for k in 0..=20 {
        let r = eps * 10f64.powf(-3.0 + 0.1 * k as f64);
        let x = v1 + Vec2::new(r, 0.0);
        let err = (eval_gradient(&u, x).unwrap() - ms.gradient(x)).norm();
        assert!(err < 1e-7, "r = {r}: {err}");
    }
}

#[test]
fn zero_data_gives_zero_density() {
    let m = mesh(PI / 2.0, 0.05);
    let u = solve(&m, ProblemKind::PointCharges { charges: vec![] });
    let norm: f64 = u.density.iter().map(|d| d * d).sum::<f64>().sqrt();
    assert!(norm < 1e-12);
}

#[test]
fn problem_and_layout_must_agree() {
    let single = BowtieConfig::single(PI / 2.0, 0.05);
    let spec = ProblemSpec::new(ProblemKind::CapacityQ, single);
    assert!(spec.validate().is_err());
    let pair = BowtieConfig::new(PI / 2.0, 0.05);
    let spec = ProblemSpec::new(ProblemKind::SingleInclusion(DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.0, 0.05)), pair);
    assert!(spec.validate().is_err());
}

#[test]
fn emitter_on_the_boundary_is_rejected() {
    let m = mesh(PI / 2.0, 0.05);
    let kind = ProblemKind::Emitter(DipoleSpec::at(Vec2::new(1.0, 0.0), Vec2::new(0.6, 0.1)));
    assert!(solve_on_mesh(m, &kind, &SolverOptions::default()).is_err());
}

#[test]
fn refinement_changes_the_field_by_less_than_a_millionth() {
    let eps = 0.01;
    let dip = DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps);
    let coarse = BowtieConfig::new(PI / 2.0, eps);
    let mut fine = coarse.clone();
    fine.panels_per_side *= 2;
    let uc = solve(&Arc::new(PanelMesh::build(&coarse).unwrap()), ProblemKind::Emitter(dip));
    let uf = solve(&Arc::new(PanelMesh::build(&fine).unwrap()), ProblemKind::Emitter(dip));
    let pts: Vec<Vec2> = exterior_ring(&PanelMesh::build(&coarse).unwrap(), 0.6 * eps, 0.5, 8, 12)
        .into_iter()
        .filter(|x| PanelMesh::build(&coarse).map(|m| m.nearest_panel(*x).1 >= 0.1 * eps).unwrap())
        .collect();
    assert!(pts.len() > 20);
    for x in pts {
        let (a, b) = (eval_gradient(&uc, x).unwrap(), eval_gradient(&uf, x).unwrap());
        assert!((a - b).norm() < 1e-6 * b.norm(), "{x:?}");
        let (p, q) = (eval_potential(&uc, x).unwrap(), eval_potential(&uf, x).unwrap());
        assert!((p - q).abs() < 1e-6 * q.abs().max(1e-3));
    }
}

#[test]
fn summary_serialises_with_the_mesh_hash() {
    let m = mesh(PI / 2.0, 0.05);
    let u = solve(&m, ProblemKind::CapacityQ);
    let json = serde_json::to_value(u.summary()).unwrap();
    assert_eq!(json["mesh_hash"].as_str().unwrap(), m.hash());
    assert_eq!(json["n_nodes"].as_u64().unwrap() as usize, m.n_nodes());
}

#[test]
fn auxiliary_v_lies_between_zero_and_the_dipole_in_case1() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let dip = DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps);
    let v = solve(&m, ProblemKind::AuxiliaryV(dip));
    let pts = exterior_ring(&m, 0.04, 2.0, 12, 20);
    let mut count = 0;
    for x in pts {
        if x.x.abs() < 1e-3 || x.dist(dip.location) < 0.2 * eps {
            continue;
        }
        let val = eval_potential(&v, x).unwrap();
        let d = dipole_potential(x, &dip).unwrap();
        if x.x > 0.0 {
            assert!(0.0 < val && val < d, "{x:?}: v = {val}, dipole = {d}");
        } else {
            assert!(d < val && val < 0.0, "{x:?}: v = {val}, dipole = {d}");
        }
        count += 1;
    }
    assert!(count >= 100);
}

#[test]
fn auxiliary_v_is_dominated_by_the_dipole_in_case2() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let dip = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.0, eps);
    let v = solve(&m, ProblemKind::AuxiliaryV(dip));
    let pts = exterior_ring(&m, 0.04, 2.0, 12, 20);
    let mut count = 0;
    for x in pts {
        let val = eval_potential(&v, x).unwrap();
        let d = dipole_potential(x, &dip).unwrap();
        assert!(val.abs() <= d.abs() + 1e-12, "{x:?}");
        assert!(d.abs() <= 1.0 / (2.0 * PI * x.norm()) + 1e-12);
        if x.y > 1e-3 {
            assert!(0.0 < val && val < d, "{x:?}: v = {val}, dipole = {d}");
        }
        count += 1;
    }
    assert!(count >= 100);
}

#[test]
fn manufactured_normal_derivative_on_the_boundary() {
    let eps = 0.05;
    let m = mesh(PI / 2.0, eps);
    let ms = ManufacturedSolution::new(&m, vec![(Vec2::new(-0.5, 0.02), 1.0), (Vec2::new(0.7, -0.05), -1.0)]).unwrap();
    let u = solve(&m, ms.problem());
    let mut worst = 0.0f64;
    let mut n = 0;
    for i in 0..m.n_nodes() {
        if let Ok(d) = normal_derivative_on_boundary(&u, i) {
            worst = worst.max((d - m.normal(i).dot(ms.gradient(m.node(i)))).abs());
            n += 1;
        }
    }
    assert!(n > 100);
    assert!(worst < 1e-7, "worst {worst}");
}
