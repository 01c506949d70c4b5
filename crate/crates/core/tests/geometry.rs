use bowtie::geometry::*;
use bowtie::Vec2;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn mesh_nodes_lie_on_the_inclusion_boundaries() {
    let cfg = BowtieConfig::new(PI / 2.0, 0.01);
    let mesh = PanelMesh::build(&cfg).unwrap();
    for i in 0..mesh.n_nodes() {
        let x = mesh.node(i);
        let c = &mesh.components[mesh.component_of_node(i)];
        match c.shape {
            ComponentShape::Sector(s) => {
                // straight part of the edges; fillet and cap nodes are covered by the inside/outside probe
                if x.dist(s.vertex) < 0.9 * s.edge_length {
                    assert!(s.edge_distance(x) < 1e-12, "node {i} off the boundary");
                }
            }
            _ => unreachable!(),
        }
        assert!((mesh.normal(i).norm() - 1.0).abs() < 1e-14);
        // the normal points into the inclusion
        let inward = x + mesh.normal(i) * 1e-7;
        let outward = x - mesh.normal(i) * 1e-7;
        assert!(mesh.contains(inward) && !mesh.contains(outward), "node {i}");
    }
}

#[test]
fn weights_sum_to_the_exact_perimeter() {
    let cfg = BowtieConfig::new(PI / 2.0, 0.02);
    let mesh = PanelMesh::build(&cfg).unwrap();
    let s = cfg.sector(2);
    // bounded by the straight edges below and by edges, cap arc and full fillet circles above
    let rf = s.fillet;
    let t = s.edge_length;
    let arc = 2.0 * s.half_angle * s.radius;
    let total: f64 = (0..mesh.n_nodes()).filter(|&i| mesh.component_of_node(i) == 1).map(|i| mesh.weight(i)).sum();
    let per = mesh.perimeters();
    assert!((total - per[1]).abs() < 1e-12 * per[1]);
    assert!(per[1] > 2.0 * t && per[1] < 2.0 * t + arc + 2.0 * PI * rf);
    assert!((per[0] - per[1]).abs() < 1e-12);
}

#[test]
fn mesh_is_point_symmetric_and_mirror_symmetric() {
    let cfg = BowtieConfig::new(PI / 3.0, 0.05);
    let mesh = PanelMesh::build(&cfg).unwrap();
    let mut a: Vec<(i64, i64)> = Vec::new();
    let mut b: Vec<(i64, i64)> = Vec::new();
    let key = |v: Vec2| ((v.x * 1e9).round() as i64, (v.y * 1e9).round() as i64);
    for i in 0..mesh.n_nodes() {
        let x = mesh.node(i);
        a.push(key(x));
        b.push(key(x.mirror_x()));
    }
    a.sort();
    b.sort();
    assert_eq!(a, b, "node set is not symmetric under x1 -> -x1");
    let mut c: Vec<(i64, i64)> = (0..mesh.n_nodes()).map(|i| key(mesh.node(i).mirror_y())).collect();
    c.sort();
    assert_eq!(a, c, "node set is not symmetric under x2 -> -x2");
}

#[test]
fn grading_concentrates_panels_at_the_vertex() {
    let coarse = PanelMesh::build(&BowtieConfig::new(PI / 2.0, 0.1)).unwrap();
    let fine = PanelMesh::build(&BowtieConfig::new(PI / 2.0, 0.001)).unwrap();
    assert!(fine.panels.len() > coarse.panels.len());
    // panel count grows like log(1/eps)
    assert!(fine.panels.len() < 2 * coarse.panels.len());
    let smallest = fine.panels.iter().map(|p| p.length).fold(f64::INFINITY, f64::min);
    assert!(smallest < 1e-3 * 0.001 * 1e-3 * 1e3);
    let bp = edge_breakpoints(0.01, 32, 3.0, 0.25, 0.1, 1.75);
    assert!(bp.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(bp[0], 0.0);
    assert!((bp.last().unwrap() - 1.75).abs() < 1e-15);
    assert!((bp[1] - 0.01 * (1.0f64 / 32.0).powi(3)).abs() < 1e-18);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(BowtieConfig::new(PI / 2.0, 0.3).validate().is_err());
    assert!(BowtieConfig::new(0.0, 0.01).validate().is_err());
    assert!(BowtieConfig::new(PI, 0.01).validate().is_err());
    let mut c = BowtieConfig::new(PI / 2.0, 0.01);
    c.nodes_per_panel = 1;
    assert!(c.validate().is_err());
    assert!(PanelMesh::build(&BowtieConfig::new(PI / 2.0, -0.01)).is_err());
}

#[test]
fn emitter_clearance_is_enforced() {
    let mesh = PanelMesh::build(&BowtieConfig::new(PI / 2.0, 0.01)).unwrap();
    assert!(mesh.check_source_clearance(Vec2::new(0.0, 0.005)).is_ok());
    assert!(mesh.check_source_clearance(Vec2::new(0.6, 0.12)).is_err());
}

#[test]
fn condition_a_examples() {
    let r = check_condition_a(PI / 2.0, 0.5).unwrap();
    assert!(r.holds);
    assert!(r.center.norm() < 1e-15 && (r.radius - 0.5).abs() < 1e-15);
    let r = check_condition_a(0.9 * PI, 0.1).unwrap();
    assert!(!r.holds);
    let w = r.witness.unwrap();
    assert!(w.y < 0.0 && w.x > 0.5, "witness on the lower edge of the right cone");
    assert!((w.x - 0.5 - 0.346).abs() < 1e-3);
    assert!((w.dist(r.center) - r.radius).abs() < 1e-12);
    assert!(check_condition_a(PI / 2.0, 0.0).is_err());
}

/// Does the circle through both unit-gap vertices and `(0, p)` meet an edge away from the vertex?
fn brute_condition_a(alpha: f64, p: f64) -> bool {
    let k = (p * p - 0.25) / (2.0 * p);
    let c = Vec2::new(0.0, k);
    let r = (0.25 + k * k).sqrt();
    let a = 0.5 * alpha;
    for dir in [Vec2::new(a.cos(), a.sin()), Vec2::new(a.cos(), -a.sin())] {
        let mut prev = None;
        for i in 1..200_000 {
            let s = 1e-6 * (1.0f64 + 1e-4).powi(i);
            if s > 1e3 {
                break;
            }
            let y = Vec2::new(0.5, 0.0) + dir * s;
            let sign = y.dist(c) < r;
            if let Some(p0) = prev {
                if p0 != sign {
                    return false;
                }
            }
            prev = Some(sign);
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn condition_a_agrees_with_edge_scan(alpha in 0.1f64..3.0, p in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0]) {
        let r = check_condition_a(alpha, p).unwrap();
        // skip geometries where the circle is nearly tangent to an edge
        let k = (p * p - 0.25) / (2.0 * p);
        let c = Vec2::new(0.0, k);
        let a = 0.5 * alpha;
        let tangency = [Vec2::new(a.cos(), a.sin()), Vec2::new(a.cos(), -a.sin())]
            .iter()
            .map(|d| (-2.0 * (Vec2::new(0.5, 0.0) - c).dot(*d)).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(tangency > 1e-3);
        prop_assert_eq!(r.holds, brute_condition_a(alpha, p));
    }

    #[test]
    fn polar_chart_round_trips(r in 1e-6f64..10.0, t in 0.0f64..1.0, alpha in 0.1f64..3.0, v in 1usize..3) {
        let chart = CornerChart::scaled(v, alpha);
        let th = t * chart.opening();
        let (r2, th2) = chart.polar(chart.point(r, th)).unwrap();
        prop_assert!((r2 - r).abs() < 1e-12 * r);
        prop_assert!((th2 - th).abs() < 1e-9);
    }

    #[test]
    fn points_inside_the_cone_have_no_polar_coordinates(r in 1e-3f64..10.0, t in 0.01f64..0.99, alpha in 0.1f64..3.0) {
        let chart = CornerChart::scaled(2, alpha);
        let y = chart.vertex + Vec2::from_angle((t - 0.5) * alpha) * r;
        prop_assert!(scaled_cone_contains(y, alpha));
        prop_assert!(chart.polar(y).is_err());
    }

    #[test]
    fn scaling_preserves_membership_near_the_gap(x in -20.0f64..20.0, y in -20.0f64..20.0, eps in 0.001f64..0.1) {
        let cfg = BowtieConfig::new(PI / 2.0, eps);
        let pt = Vec2::new(x, y);
        prop_assume!((pt * eps).norm() < 0.9 * cfg.mu);
        prop_assert!(scale_relation_check(&cfg, pt).unwrap());
    }
}
