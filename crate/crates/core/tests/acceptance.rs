//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use bowtie::analytic::{dipole_potential, Exponents};
use bowtie::bie::{solve_on_mesh, ProblemKind, SolveResult, SolverOptions};
use bowtie::experiments::{angle_gradient_identity, corner_gradient_identity, epsilon_sweep, Case, Report, SweepConfig, SweepOutput};
use bowtie::fields::{eval_gradient, eval_potential, normal_derivative_on_boundary, sigma_consistency};
use bowtie::geometry::{BowtieConfig, PanelMesh};
use bowtie::oracles::disk::DiskProblem;
use bowtie::oracles::fd::{fd_reference_solve, interpolate, FdProblem};
use bowtie::oracles::manufactured::ManufacturedSolution;
use bowtie::oracles::{disk_report, OracleReport};
use bowtie::{analytic::DipoleSpec, Vec2};
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<(bool, String), String>;

const RIGHT: f64 = PI / 2.0;

fn solve(m: &Arc<PanelMesh>, kind: ProblemKind) -> Result<SolveResult, String> {
    solve_on_mesh(m.clone(), &kind, &SolverOptions::default()).map_err(|e| e.to_string())
}

fn mesh(alpha: f64, eps: f64) -> Result<Arc<PanelMesh>, String> {
    PanelMesh::build(&BowtieConfig::new(alpha, eps)).map(Arc::new).map_err(|e| e.to_string())
}

/// Deterministic exterior points at least `gap * eps` from the boundary.
fn exterior_points(m: &PanelMesh, eps: f64, n: usize, gap: f64) -> Vec<Vec2> {
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < n && k < 100 * n {
        k += 1;
        let r = 0.6 * eps * (1.0f64 / (0.6 * eps)).powf(((k * 37) % 101) as f64 / 100.0);
        let x = Vec2::from_angle(2.399963 * k as f64) * r;
        if !m.contains(x) && m.nearest_panel(x).1 > gap * eps {
            out.push(x);
        }
    }
    out
}

fn sweep(case: Case) -> Result<SweepOutput, String> {
    epsilon_sweep(&SweepConfig::new(case, RIGHT)).map_err(|e| e.to_string())
}

fn failures(r: &Report) -> String {
    let f = r.failures();
    if f.is_empty() {
        String::new()
    } else {
        format!(" failures: {}", f.join(", "))
    }
}

fn spatial_slopes(r: &Report) -> Vec<(f64, Option<f64>)> {
    r.fits_named("spatial_slope").map(|f| (f.epsilon.unwrap_or(f64::NAN), f.slope())).collect()
}

fn c1_identities() -> Outcome {
    let mut worst_b = 0.0f64;
    let mut worst_phi = 0.0f64;
    let mut count = usize::MAX;
    for alpha in [RIGHT, 0.3 * PI, 0.8 * PI] {
        for j in [1, 2] {
            worst_b = worst_b.max(corner_gradient_identity(alpha, j).map_err(|e| e.to_string())?);
        }
        let (w, n) = angle_gradient_identity(alpha).map_err(|e| e.to_string())?;
        worst_phi = worst_phi.max(w);
        count = count.min(n);
    }
    let e = Exponents::new(RIGHT);
    let exact = e.beta == 2.0 / 3.0 && e.gamma == 2.0;
    Ok((
        worst_b < 1e-12 && worst_phi < 1e-12 && count >= 1000 && exact,
        format!("|grad B| dev {worst_b:.2e}, |grad phi||Y-Q| dev {worst_phi:.2e} on >= {count} pts, beta {} gamma {}", e.beta, e.gamma),
    ))
}

fn c2_oracles() -> Outcome {
    // disk
    let disk = DiskProblem::new(Vec2::new(0.3, 0.1), 0.5, Vec2::new(-0.2, 1.0), Vec2::new(0.3, 0.75)).map_err(|e| e.to_string())?;
    let m = Arc::new(PanelMesh::circle(disk.center, disk.radius, 256, 8).map_err(|e| e.to_string())?);
    let u = solve(&m, ProblemKind::SingleInclusion(DipoleSpec::at(disk.direction, disk.location)))?;
    let mut samples = Vec::new();
    for i in 0..25 {
        for k in 0..40 {
            let r = disk.radius * (1.1 + 2.0 * i as f64 / 24.0);
            let x = disk.center + Vec2::from_angle(2.0 * PI * (k as f64 + 0.25) / 40.0) * r;
            if x.dist(disk.location) >= 0.1 * disk.radius {
                samples.push(x);
            }
        }
    }
    let dr = disk_report(&disk, &u, &samples).map_err(|e| e.to_string())?;

    // manufactured field along the bisector of a single graded corner
    let eps = 0.01;
    let cfg = BowtieConfig::single(RIGHT, eps);
    let sm = Arc::new(PanelMesh::build(&cfg).map_err(|e| e.to_string())?);
    let ms = ManufacturedSolution::new(&sm, vec![(Vec2::new(-0.4, 0.05), 1.0), (Vec2::new(-0.4, -0.05), -1.0)]).map_err(|e| e.to_string())?;
    let mu = solve(&sm, ms.problem())?;
    let mut pairs = Vec::new();
    for k in 0..=20 {
        let x = cfg.vertex(1) + Vec2::new(eps * 10f64.powf(-3.0 + 0.1 * k as f64), 0.0);
        pairs.push((ms.gradient(x), eval_gradient(&mu, x).map_err(|e| e.to_string())?));
    }
    let mr = OracleReport::from_pairs("manufactured", &pairs, 0.0);

    // finite differences for the regular part of Case 2
    let eps = 0.1;
    let geometry = BowtieConfig::new(RIGHT, eps);
    let bm = Arc::new(PanelMesh::build(&geometry).map_err(|e| e.to_string())?);
    let dip = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.0, eps);
    let bu = solve(&bm, ProblemKind::Emitter(dip))?;
    let regular = |x: Vec2| eval_potential(&bu, x).unwrap() - dip.potential(x).unwrap();
    let inclusion = |x: Vec2, c: usize| bu.constant(c) - dip.potential(x).unwrap();
    let problem = FdProblem { geometry: &geometry, inclusion_data: &inclusion, box_data: &regular, half_width: 0.5 };
    let mut fd = Vec::new();
    for cells in [512, 1024] {
        let grid = fd_reference_solve(&problem, cells).map_err(|e| e.to_string())?;
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for j in 0..21 {
            for i in 0..21 {
                let x = Vec2::new(-0.45 + 0.045 * i as f64, -0.45 + 0.045 * j as f64);
                let far = x.dist(geometry.vertex(1)).min(x.dist(geometry.vertex(2))) >= 0.2 * eps;
                if x.norm() < 1e-9 || bm.contains(x) || !far || bm.nearest_panel(x).1 < 5.0 * grid.h {
                    continue;
                }
                if let Some(f) = interpolate(&grid, x) {
                    let b = regular(x);
                    worst = worst.max((f - b).abs());
                    scale = scale.max(b.abs());
                }
            }
        }
        fd.push(worst / scale);
    }
    let pass = dr.max_rel_error < 1e-8 && dr.sample_count >= 100 && mr.max_abs_error < 1e-7 && fd.iter().all(|e| *e < 1e-2);
    Ok((
        pass,
        format!(
            "disk rel {:.2e} ({} pts), manufactured {:.2e} down to 1e-3 eps, FD rel {:.2e} (512) {:.2e} (1024), refinement ratio {:.2}",
            dr.max_rel_error,
            dr.sample_count,
            mr.max_abs_error,
            fd[0],
            fd[1],
            fd[0] / fd[1]
        ),
    ))
}

fn c3_symmetry() -> Outcome {
    let eps = 0.05;
    let m = mesh(RIGHT, eps)?;
    let mut msgs = Vec::new();
    let mut pass = true;
    let pts = exterior_points(&m, eps, 300, 0.05);

    // Case 1 skew symmetry
    let d1 = DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps);
    let u1 = solve(&m, ProblemKind::Emitter(d1))?;
    let mut worst = (u1.constant(1) + u1.constant(2)).abs();
    let mut n = 0;
    for &x in &pts {
        let mx = Vec2::new(-x.x, x.y);
        if x.dist(d1.location) < 0.1 * eps {
            continue;
        }
        let a = eval_potential(&u1, x).map_err(|e| e.to_string())?;
        let b = eval_potential(&u1, mx).map_err(|e| e.to_string())?;
        worst = worst.max((a + b).abs() / a.abs().max(1.0));
        n += 1;
    }
    pass &= worst < 1e-9 && n >= 100;
    msgs.push(format!("case1 skew {worst:.1e} ({n})"));

    // Case 2 zero constants and oddness in x2
    let d2 = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.0, eps);
    let u2 = solve(&m, ProblemKind::Emitter(d2))?;
    let mut worst = u2.constant(1).abs().max(u2.constant(2).abs());
    let mut n = 0;
    for &x in &pts {
        let a = eval_potential(&u2, x).map_err(|e| e.to_string())?;
        let b = eval_potential(&u2, x.mirror_y()).map_err(|e| e.to_string())?;
        worst = worst.max((a + b).abs() / a.abs().max(1.0));
        n += 1;
    }
    pass &= worst < 1e-9 && n >= 100;
    msgs.push(format!("case2 odd {worst:.1e} ({n})"));

    // Case 3 zero gap
    let d3 = DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.5, eps);
    let u3 = solve(&m, ProblemKind::Emitter(d3))?;
    let gap = (u3.constant(2) - u3.constant(1)).abs();
    pass &= gap < 1e-9;
    msgs.push(format!("case3 gap {gap:.1e}"));

    // Hopf sign
    let q = solve(&m, ProblemKind::CapacityQ)?;
    let mut bad = 0;
    let mut n = 0;
    for i in 0..m.n_nodes() {
        if m.arc_coordinate(i) <= 0.01 * eps {
            continue;
        }
        let s = if m.components[m.component_of_node(i)].label == 2 { 1.0 } else { -1.0 };
        let d = normal_derivative_on_boundary(&q, i).map_err(|e| e.to_string())?;
        if !(s * d > 0.0) {
            bad += 1;
        }
        n += 1;
    }
    pass &= bad == 0 && n >= 100;
    msgs.push(format!("hopf {bad} violations of {n}"));

    // sign bounds on v
    let v1 = solve(&m, ProblemKind::AuxiliaryV(d1))?;
    let v2 = solve(&m, ProblemKind::AuxiliaryV(d2))?;
    let (mut bad1, mut n1, mut bad2, mut n2) = (0, 0, 0, 0);
    for &x in &pts {
        if x.x.abs() > 1e-3 && x.dist(d1.location) > 0.2 * eps {
            let v = eval_potential(&v1, x).map_err(|e| e.to_string())?;
            let d = dipole_potential(x, &d1).map_err(|e| e.to_string())?;
            let ok = if x.x > 0.0 { 0.0 < v && v < d } else { d < v && v < 0.0 };
            bad1 += usize::from(!ok);
            n1 += 1;
        }
        let v = eval_potential(&v2, x).map_err(|e| e.to_string())?;
        let d = dipole_potential(x, &d2).map_err(|e| e.to_string())?;
        let ok = v.abs() <= d.abs() && d.abs() <= 1.0 / (2.0 * PI * x.norm());
        bad2 += usize::from(!ok);
        n2 += 1;
    }
    pass &= bad1 == 0 && n1 >= 100 && bad2 == 0 && n2 >= 100;
    msgs.push(format!("v bounds case1 {bad1}/{n1} case2 {bad2}/{n2} violations"));
    Ok((pass, msgs.join("; ")))
}

fn c4_case1_slopes(r: &Report) -> Outcome {
    let beta = r.beta;
    let spatial = spatial_slopes(r);
    let ok_spatial = spatial.len() == r.per_epsilon.len()
        && spatial.iter().all(|(_, s)| s.map_or(false, |s| (s - (beta - 1.0)).abs() <= 0.02));
    let es = r.fit("epsilon_slope").and_then(|f| f.slope());
    let ok_eps = es.map_or(false, |s| (s + 1.0 + beta).abs() <= 0.1);
    let range = spatial.iter().filter_map(|(_, s)| *s).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s), b.max(s)));
    Ok((
        ok_spatial && ok_eps,
        format!("spatial slopes in [{:.4}, {:.4}] (target {:.4}), eps slope {:?} (target {:.4})", range.0, range.1, beta - 1.0, es, -(1.0 + beta)),
    ))
}

fn c5_case1_bands(r: &Report) -> Outcome {
    let mut pass = true;
    let mut msgs = Vec::new();
    for (name, limit) in [("mid_range", 3.0), ("u_gap", 2.0), ("q_gap", 2.0), ("near_vertex_flux", f64::INFINITY)] {
        match r.band(name) {
            Some(b) => {
                let ok = b.pass && b.ratio < limit && b.min > 0.0;
                pass &= ok;
                msgs.push(format!("{name} ratio {:.3} over {} eps", b.ratio, b.values.len()));
            }
            None => {
                pass = false;
                msgs.push(format!("{name} missing"));
            }
        }
    }
    Ok((pass, msgs.join("; ")))
}

fn c6_case2(r: &Report) -> Outcome {
    let band = r.band("upper_bound").ok_or("upper_bound band missing")?;
    let slope = r.fit("sup_epsilon_slope").and_then(|f| f.slope());
    let zero = r.checks_named("zero_constants").all(|c| c.pass);
    let pass = band.pass && band.ratio < 3.0 && slope.map_or(false, |s| s.abs() <= 0.1) && zero && r.pass;
    Ok((pass, format!("sup band ratio {:.3}, sup eps slope {:?}{}", band.ratio, slope, failures(r))))
}

fn c7_case3(r: &Report) -> Outcome {
    let a1: Vec<f64> = r.per_epsilon.iter().filter_map(|e| e.corner.map(|c| c.a1)).collect();
    let ex = r.band("extremal_max_scaled").map(|b| b.ratio);
    let es = r.fit("epsilon_slope").and_then(|f| f.slope());
    let pass = r.condition_a == Some(true) && r.pass && !a1.is_empty() && a1.iter().all(|a| *a < 0.0);
    Ok((
        pass,
        format!("condition (A) {:?}, eps slope {:?}, a1 {:?}, extremal band ratio {:?}{}", r.condition_a, es, a1, ex, failures(r)),
    ))
}

fn c8_single(single: &Report, case1: &Report) -> Outcome {
    let a = spatial_slopes(single);
    let b = spatial_slopes(case1);
    let mut worst = 0.0f64;
    let mut complete = a.len() == b.len() && !a.is_empty();
    for ((ea, sa), (eb, sb)) in a.iter().zip(&b) {
        match (sa, sb) {
            (Some(x), Some(y)) if ea == eb => worst = worst.max((x - y).abs()),
            _ => complete = false,
        }
    }
    let es = match (single.fit("epsilon_slope").and_then(|f| f.slope()), case1.fit("epsilon_slope").and_then(|f| f.slope())) {
        (Some(x), Some(y)) => (x - y).abs(),
        _ => f64::INFINITY,
    };
    Ok((complete && worst <= 0.05 && es <= 0.05, format!("max spatial slope difference {worst:.4}, eps slope difference {es:.4}")))
}

fn c9_sigma() -> Outcome {
    let eps = 0.02;
    let m = mesh(RIGHT, eps)?;
    let q = solve(&m, ProblemKind::CapacityQ)?;
    let mut msgs = Vec::new();
    let mut pass = true;
    for (label, dir) in [("case1", Vec2::new(1.0, 0.0)), ("case3", Vec2::new(0.0, 1.0))] {
        let dip = DipoleSpec::emitter(dir, 0.5, eps);
        let u = solve(&m, ProblemKind::Emitter(dip))?;
        let v = solve(&m, ProblemKind::AuxiliaryV(dip))?;
        let pts: Vec<Vec2> = exterior_points(&m, eps, 400, 0.1).into_iter().filter(|x| x.dist(dip.location) > 0.1 * eps).take(200).collect();
        let dev = sigma_consistency(&u, &q, &v, &pts).map_err(|e| e.to_string())?;
        pass &= dev < 1e-7 && pts.len() == 200;
        msgs.push(format!("{label} {dev:.2e} on {} pts", pts.len()));
    }
    Ok((pass, msgs.join("; ")))
}

fn c10_determinism(first: &SweepOutput) -> Outcome {
    let second = sweep(Case::Case1)?;
    let dir = std::env::temp_dir().join(format!("bowtie-acceptance-{}", std::process::id()));
    let (a, b) = (dir.join("a"), dir.join("b"));
    first.write(&a).map_err(|e| e.to_string())?;
    second.write(&b).map_err(|e| e.to_string())?;
    let mut same = true;
    for f in ["report.json", "samples.csv"] {
        same &= std::fs::read(a.join(f)).map_err(|e| e.to_string())? == std::fs::read(b.join(f)).map_err(|e| e.to_string())?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok((same, format!("report.json and samples.csv {}", if same { "byte-identical" } else { "differ" })))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let (pass, detail) = match outcome {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    println!("criterion {n}: {} {name} [{:.1}s] {detail}", if pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    pass
}

fn main() {
    let mut results = Vec::new();
    results.push(run(1, "analytic identities", c1_identities));
    results.push(run(2, "oracle equivalence", c2_oracles));
    results.push(run(3, "symmetry and sign suite", c3_symmetry));

    let case1 = sweep(Case::Case1);
    let case1_report = case1.as_ref().map(|o| o.report.clone()).map_err(|e| e.clone());
    results.push(run(4, "case 1 near-vertex law", || c4_case1_slopes(case1_report.as_ref().map_err(|e| e.clone())?)));
    results.push(run(5, "case 1 mid-range and gaps", || c5_case1_bands(case1_report.as_ref().map_err(|e| e.clone())?)));
    results.push(run(6, "case 2 non-enhancement", || c6_case2(&sweep(Case::Case2)?.report)));
    results.push(run(7, "case 3 with condition (A)", || c7_case3(&sweep(Case::Case3)?.report)));
    results.push(run(8, "single inclusion matches case 1", || {
        c8_single(&sweep(Case::SingleInclusion)?.report, case1_report.as_ref().map_err(|e| e.clone())?)
    }));
    results.push(run(9, "decomposition identity", c9_sigma));
    results.push(run(10, "determinism", || c10_determinism(case1.as_ref().map_err(|e| e.clone())?)));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
