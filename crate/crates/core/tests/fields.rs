use bowtie::analytic::DipoleSpec;
use bowtie::bie::{solve_on_mesh, ProblemKind, SolveResult, SolverOptions};
use bowtie::fields::*;
use bowtie::geometry::{BowtieConfig, CornerChart, PanelMesh};
use bowtie::io::samples_csv;
use bowtie::{Result, Vec2};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn solve(m: &Arc<PanelMesh>, kind: ProblemKind) -> SolveResult {
    solve_on_mesh(m.clone(), &kind, &SolverOptions::default()).unwrap()
}

/// Deterministic exterior points at least `gap` away from the boundary.
fn points(m: &PanelMesh, eps: f64, n: usize, gap: f64) -> Vec<Vec2> {
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < n {
        k += 1;
        let r = 0.6 * eps * (1.0f64 / (0.6 * eps)).powf(((k * 37) % 101) as f64 / 100.0);
        let x = Vec2::from_angle(2.399963 * k as f64) * r;
        if !m.contains(x) && m.nearest_panel(x).1 > gap * eps {
            out.push(x);
        }
    }
    out
}

fn sigma_check(direction: Vec2, p: f64) {
    let eps = 0.02;
    let m = Arc::new(PanelMesh::build(&BowtieConfig::new(PI / 2.0, eps)).unwrap());
    let dip = DipoleSpec::emitter(direction, p, eps);
    let u = solve(&m, ProblemKind::Emitter(dip));
    let q = solve(&m, ProblemKind::CapacityQ);
    let v = solve(&m, ProblemKind::AuxiliaryV(dip));
    let pts: Vec<Vec2> = points(&m, eps, 200, 0.05).into_iter().filter(|x| x.dist(dip.location) > 0.1 * eps).collect();
    assert!(pts.len() >= 190);
    let dev = sigma_consistency(&u, &q, &v, &pts).unwrap();
    assert!(dev < 1e-7, "deviation {dev}");
    // swapping the roles is refused
    assert!(sigma_consistency(&q, &u, &v, &pts).is_err());
}

#[test]
fn decomposition_identity_case1() {
    sigma_check(Vec2::new(1.0, 0.0), 0.5);
}

#[test]
fn decomposition_identity_case3() {
    sigma_check(Vec2::new(0.0, 1.0), 0.5);
}

#[test]
fn fourier_modes_recover_synthetic_coefficients() {
    for alpha in [PI / 2.0, 0.3 * PI, 0.8 * PI] {
        for vid in [1, 2] {
            let chart = CornerChart::scaled(vid, alpha);
            let beta = chart.beta();
            let coeffs = [0.7, -1.3, 0.25];
            let f = |y: Vec2| -> Result<f64> {
                let (r, th) = chart.polar(y)?;
                Ok(coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c * r.powf((n + 1) as f64 * beta) * ((n + 1) as f64 * beta * th).sin())
                    .sum())
            };
            for r in [0.05, 0.2] {
                let a = fourier_modes(&f, &chart, r, 4).unwrap();
                for n in 0..3 {
                    assert!((a[n] - coeffs[n]).abs() < 1e-8, "alpha {alpha} vertex {vid} mode {n}: {}", a[n]);
                }
                assert!(a[3].abs() < 1e-8);
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let eps = 0.05;
    let m = Arc::new(PanelMesh::build(&BowtieConfig::new(PI / 2.0, eps)).unwrap());
    let u = solve(&m, ProblemKind::Emitter(DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps)));
    for x in points(&m, eps, 40, 0.2) {
        if x.dist(Vec2::new(0.0, 0.5 * eps)) < 0.2 * eps {
            continue;
        }
        let h = 1e-4 * x.norm().max(eps);
        let dx = Vec2::new(h, 0.0);
        let dy = Vec2::new(0.0, h);
        let fd = Vec2::new(
            (eval_potential(&u, x + dx).unwrap() - eval_potential(&u, x - dx).unwrap()) / (2.0 * h),
            (eval_potential(&u, x + dy).unwrap() - eval_potential(&u, x - dy).unwrap()) / (2.0 * h),
        );
        let g = eval_gradient(&u, x).unwrap();
        assert!((g - fd).norm() < 1e-5 * g.norm().max(1.0), "{x:?}: {g:?} vs {fd:?}");
    }
}

#[test]
fn evaluation_inside_an_inclusion_is_an_error() {
    let eps = 0.05;
    let m = Arc::new(PanelMesh::build(&BowtieConfig::new(PI / 2.0, eps)).unwrap());
    let q = solve(&m, ProblemKind::CapacityQ);
    assert!(eval_potential(&q, Vec2::new(0.5, 0.0)).is_err());
    assert!(eval_gradient(&q, Vec2::new(-0.5, 0.0)).is_err());
    assert!(sample_field(&q, &[Vec2::new(0.0, 1.0), Vec2::new(0.5, 0.0)], &RegimeThresholds::default()).is_err());
}

#[test]
fn corner_coefficient_arguments_are_checked() {
    let eps = 0.05;
    let m = Arc::new(PanelMesh::build(&BowtieConfig::new(PI / 2.0, eps)).unwrap());
    let u = solve(&m, ProblemKind::Emitter(DipoleSpec::emitter(Vec2::new(0.0, 1.0), 0.5, eps)));
    assert!(extract_corner_coefficient(&u, 1, 0.25 * eps).is_err());
    assert!(extract_corner_coefficient(&u, 3, 0.1 * eps).is_err());
    let cc = extract_corner_coefficient(&u, 2, 0.1 * eps).unwrap();
    assert!(cc.a1 < 0.0 && cc.truncation_estimate < 0.05);
    // point symmetry of case 3 makes the two vertices agree
    let c1 = extract_corner_coefficient(&u, 1, 0.1 * eps).unwrap();
    assert!((c1.a1 - cc.a1).abs() < 1e-6 * cc.a1.abs());
}

#[test]
fn sample_csv_is_deterministic() {
    let eps = 0.05;
    let run = || {
        let m = Arc::new(PanelMesh::build(&BowtieConfig::new(PI / 2.0, eps)).unwrap());
        let u = solve(&m, ProblemKind::Emitter(DipoleSpec::emitter(Vec2::new(1.0, 0.0), 0.5, eps)));
        let pts = points(&m, eps, 50, 0.1);
        samples_csv(&sample_field(&u, &pts, &RegimeThresholds::default()).unwrap())
    };
    assert_eq!(run(), run());
}

proptest! {
    #[test]
    fn regimes_follow_the_thresholds(eps in 1e-3f64..0.1, r in 1e-4f64..2.0, th in 0.0f64..(2.0 * PI)) {
        let t = RegimeThresholds::default();
        let x = Vec2::from_angle(th) * r;
        let dv = x.dist(Vec2::new(-0.5 * eps, 0.0)).min(x.dist(Vec2::new(0.5 * eps, 0.0)));
        let reg = t.classify(x, eps);
        if dv < t.near * eps {
            prop_assert_eq!(reg, Regime::NearVertex);
        } else if r > t.mid_lower * eps * eps.ln().abs() && r < t.mid_upper {
            prop_assert_eq!(reg, Regime::MidRange);
        } else {
            prop_assert_eq!(reg, Regime::Far);
        }
    }

    #[test]
    fn exterior_bisectors_point_into_the_gap(vid in 1usize..=2) {
        let b = exterior_bisector(vid);
        let v = BowtieConfig::new(PI / 2.0, 0.1).vertex(vid);
        prop_assert!((b.norm() - 1.0).abs() < 1e-15);
        prop_assert!(b.dot(v) < 0.0);
    }
}
