use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use cpolygon::constructions::build_three_circle_domain;
use cpolygon::*;
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Shape {
    Disk,
    Ellipse(f64, f64),
    Super(f64, f64),
    ThreeCircle(f64),
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        Just(Shape::Disk),
        (0.4..1.0f64, 0.0..PI).prop_map(|(b, r)| Shape::Ellipse(b, r)),
        (1.5..4.0f64, 0.5..1.0f64).prop_map(|(p, b)| Shape::Super(p, b)),
        (0.6..1.0f64).prop_map(Shape::ThreeCircle),
    ]
}

fn build(s: &Shape) -> Domain64 {
    match *s {
        Shape::Disk => make_disk(),
        Shape::Ellipse(b, r) => make_ellipse(1.0, b, r).unwrap(),
        Shape::Super(p, b) => make_superellipse(p, 1.0, b).unwrap(),
        Shape::ThreeCircle(s) => build_three_circle_domain(s).unwrap(),
    }
}

/// Body `k` touches the line `<x, u(φ_k)> = t_k` from the origin's side.
#[derive(Debug, Clone)]
struct Face {
    jitter: f64,
    scale: f64,
    depth: f64,
}

fn faces(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Face>> {
    prop::collection::vec(
        (-0.3..0.3f64, 0.5..2.0f64, 0.15..0.3f64).prop_map(|(jitter, scale, depth)| Face {
            jitter,
            scale,
            depth,
        }),
        n,
    )
}

fn scene(d: Domain64, faces: &[Face], translative: bool) -> Scene64 {
    let d = Arc::new(d);
    let n = faces.len() as f64;
    let placements: Vec<HomothetSpec<f64>> = faces
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let phi = NormalAngle::new(TAU * (k as f64 + f.jitter) / n);
            let scale = if translative { 1.0 } else { f.scale };
            let center = phi.unit() * f.depth - d.boundary_at_normal(phi) * scale;
            HomothetSpec::new(center, scale).unwrap()
        })
        .collect();
    SceneSpec::homothetic(d, &placements, Tolerances::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn counts_stay_within_bounds(sh in shape(), fs in faces(2..=6), translative in any::<bool>()) {
        let sc = scene(build(&sh), &fs, translative);
        let s = compute_structure(&sc);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let n = sc.n();
        let m = sc.m();
        let upper = if translative { n + m } else { 2 * (n - 1) + m };
        prop_assert!(s.total() >= n && s.total() <= upper, "{} not in [{n}, {upper}]", s.total());
        prop_assert!(s.pairwise_count() <= n * (n - 1));
        prop_assert!(s.inherited_count() <= m);
        prop_assert!(s.edge_families.iter().all(|f| !f.is_empty()));
        if translative && m == 0 {
            prop_assert_eq!(s.total(), n);
        }
    }

    #[test]
    fn vertices_lie_on_their_bodies(sh in shape(), fs in faces(2..=5)) {
        let sc = scene(build(&sh), &fs, false);
        let s = compute_structure(&sc);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        for v in &s.vertices {
            for (k, b) in sc.bodies().iter().enumerate() {
                let f = b.signed_membership(v.point);
                let on = match v.kind {
                    VertexKind::Pairwise { i, j } => k == i || k == j,
                    VertexKind::Inherited { owner, .. } => k == owner,
                };
                if on {
                    prop_assert!(f.abs() < 1e-7, "body {k} membership {f}");
                } else {
                    prop_assert!(f < 1e-7, "vertex outside body {k}: {f}");
                }
            }
        }
    }

    #[test]
    // inherited corners sit inside the normal arc of their edge
    fn normal_arcs_tile_the_circle(sh in shape(), fs in faces(2..=6)) {
        let sc = scene(build(&sh), &fs, false);
        let s = compute_structure(&sc);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let sum: f64 = s.edges.iter().map(|e| e.normal_arc.extent()).sum::<f64>()
            + s.vertices
                .iter()
                .filter(|v| matches!(v.kind, VertexKind::Pairwise { .. }))
                .map(|v| v.normal_arc.extent())
                .sum::<f64>();
        prop_assert!((sum - TAU).abs() < 1e-8, "sum {sum}");
    }

    #[test]
    fn removing_a_body_keeps_the_rest_proper(sh in shape(), fs in faces(3..=6), translative in any::<bool>()) {
        let sc = scene(build(&sh), &fs, translative);
        prop_assume!(matches!(check_proper(&sc), Ok(ProperReport::Proper)));
        for j in 0..sc.n() {
            prop_assert_eq!(check_proper(&sc.without(j).unwrap()).unwrap(), ProperReport::Proper, "without {}", j);
        }
    }

    #[test]
    fn overlapping_homothets_cross_twice(sh in shape(), dir in 0.0..TAU, t in 0.0..0.9f64, scale in 0.5..2.0f64) {
        let d = Arc::new(build(&sh));
        let a = PlacedBody::new(d.clone(), HomothetSpec::identity());
        // the new centre lies inside `a`, and inside `b` since `C` contains the origin
        let c = d.boundary_at_normal(NormalAngle::new(dir)) * t;
        let b = PlacedBody::new(d, HomothetSpec::new(c, scale).unwrap());
        let r = pairwise_boundary_points(&a, &b, &Tolerances::default());
        prop_assume!(!matches!(r, Err(EngineError::Degenerate(_))));
        match r.unwrap() {
            PairResult::Two(c) => {
                for p in c {
                    prop_assert!(a.signed_membership(p.point).abs() < 1e-7);
                    prop_assert!(b.signed_membership(p.point).abs() < 1e-7);
                }
                prop_assert!(c[0].point.dist(c[1].point) > 1e-9);
            }
            PairResult::NestedOrContained { a_inside_b } => {
                let (inner, outer) = if a_inside_b { (&a, &b) } else { (&b, &a) };
                for k in 0..64 {
                    let q = inner.boundary_at_normal(NormalAngle::new(TAU * k as f64 / 64.0));
                    prop_assert!(outer.signed_membership(q) <= 1e-9);
                }
            }
            PairResult::Disjoint => prop_assert!(false, "overlapping centres cannot be disjoint"),
        }
    }

    #[test]
    fn translates_leave_a_half_circle_of_normals(sh in shape(), dist in 0.05..1.9f64, dir in 0.0..TAU) {
        let d = Arc::new(build(&sh));
        let a = PlacedBody::new(d.clone(), HomothetSpec::identity());
        let b = PlacedBody::new(d, HomothetSpec::translate(Point64::polar(dir) * dist));
        let e = exterior_gauss_extent(&a, &b, &Tolerances::default());
        prop_assume!(e.is_ok());
        prop_assert!(e.unwrap() >= PI - 1e-7);
    }
}

#[test]
fn large_disk_breaks_the_half_circle() {
    let d = Arc::new(make_disk::<f64>());
    let a = PlacedBody::new(d.clone(), HomothetSpec::identity());
    let b = PlacedBody::new(d, HomothetSpec::new(Point64::new(4.5, 0.0), 5.0).unwrap());
    assert!(exterior_gauss_extent(&a, &b, &Tolerances::default()).unwrap() < PI);
}

#[test]
fn single_precision_agrees_with_double() {
    let fs: Vec<Face> = (0..5)
        .map(|k| Face {
            jitter: 0.1 * (k as f64 - 2.0),
            scale: 1.0 + 0.2 * k as f64,
            depth: 0.2 + 0.01 * k as f64,
        })
        .collect();
    let d64 = make_ellipse(1.0, 0.6, 0.4).unwrap();
    let sc64 = scene(d64, &fs, false);
    let s64 = compute_structure(&sc64).unwrap();

    let d32 = Arc::new(make_ellipse::<f32>(1.0, 0.6, 0.4).unwrap());
    let placements: Vec<HomothetSpec<f32>> = sc64
        .bodies()
        .iter()
        .map(|b| HomothetSpec::new(b.placement.center.cast(), b.placement.scale as f32).unwrap())
        .collect();
    let sc32: Scene32 = SceneSpec::homothetic(d32, &placements, Tolerances::default()).unwrap();
    let s32 = compute_structure(&sc32).unwrap();
    assert_eq!(s32.total(), s64.total());
    for (a, b) in s32.vertex_points().iter().zip(s64.vertex_points()) {
        assert!(a.cast::<f64>().dist(b) < 1e-3);
    }
}
