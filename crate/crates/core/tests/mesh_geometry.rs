mod common;

use hosr::geometry::{generate_mesh, helix_polyline, AnalyticCurve, AnalyticSurface, GeometrySpec};
use hosr::mesh::{detect_features, load_obj, parse_obj, write_obj, FeatureTags, Ring};
use hosr::surface::select_stencil;
use hosr::Vec3;
use proptest::prelude::*;

#[test]
fn cube_features() {
    for n in [1, 2, 4] {
        let g = detect_features(&common::cube(n), 30.0).unwrap();
        assert_eq!(g.chains().len(), 12);
        assert_eq!(g.corners().len(), 8);
        assert!(g.chains().iter().all(|c| !c.closed));
    }
    // a 30° threshold sees nothing on a sphere
    let s = generate_mesh(&AnalyticSurface::unit_sphere(), 1).unwrap();
    assert!(detect_features(&s, 30.0).unwrap().is_empty());
}

#[test]
fn torus_obj_round_trip() {
    let m = generate_mesh(&AnalyticSurface::torus(1.0, 0.3), 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.obj");
    write_obj(&m, &path).unwrap();
    let back = load_obj(&path, None).unwrap();
    assert_eq!(back.vertices(), m.vertices());
    assert_eq!(back.triangles(), m.triangles());
}

#[test]
fn obj_errors_name_the_line() {
    let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n", "bad.obj").unwrap_err();
    assert!(err.to_string().contains("bad.obj"), "{err}");
    let err = load_obj(std::path::Path::new("/definitely/missing.obj"), None).unwrap_err();
    assert!(err.to_string().contains("/definitely/missing.obj"));
}

#[test]
fn torus_one_ring_size() {
    let m = generate_mesh(&AnalyticSurface::torus(1.0, 0.3), 1).unwrap();
    let one = Ring::new(1.0).unwrap();
    let total: usize = (0..m.num_vertices())
        .map(|v| m.k_ring_vertices(v, one, None).unwrap().len())
        .sum();
    let mean = total as f64 / m.num_vertices() as f64;
    assert!((6.3..=7.3).contains(&mean), "{mean}");
}

#[test]
fn stencils_stay_on_one_side_of_features() {
    let d = AnalyticSurface::double_sphere();
    let m = generate_mesh(&d, 1).unwrap();
    let ch = &m.feature().chains()[0];
    let v = ch.vertices[0];
    for patch in m.vertex_patches(v) {
        let s = select_stencil(&m, v, 4, false, Some(patch)).unwrap();
        let side = |x: Vec3| x.x < 0.25 - 1e-12;
        let sides: Vec<bool> = s
            .members
            .iter()
            .filter(|&&u| !m.feature().is_feature_vertex(u))
            .map(|&u| side(m.vertex(u)))
            .collect();
        assert!(sides.iter().all(|&b| b == sides[0]));
    }
}

#[test]
fn refinement_quadruples_faces() {
    let m = common::grid(3, 2);
    let r = m.uniform_refine(None).unwrap();
    assert_eq!(r.num_faces(), 4 * m.num_faces());
    assert_eq!(r.num_vertices(), m.num_vertices() + m.num_edges());
}

#[test]
fn generated_levels() {
    let s = AnalyticSurface::unit_sphere();
    let counts: Vec<usize> = (1..=3).map(|l| generate_mesh(&s, l).unwrap().num_vertices()).collect();
    assert_eq!(counts, vec![642, 2562, 10242]);
    let t = AnalyticSurface::torus(1.0, 0.3);
    assert_eq!(generate_mesh(&t, 2).unwrap().num_vertices(), 4 * 896);
    assert_eq!(helix_polyline(3).unwrap().points.len(), 1024);
    assert!(generate_mesh(&s, 0).is_err());
}

#[test]
fn tagged_features_are_validated() {
    let m = common::grid(2, 2);
    let bad = FeatureTags {
        edges: vec![(0, 8)],
        corners: vec![],
    };
    assert!(m.with_features(&bad).is_err());
}

#[test]
fn geometry_specs() {
    assert!(matches!("helix".parse::<GeometrySpec>(), Ok(GeometrySpec::Helix)));
    assert!("torus:R=0.2,r=0.3".parse::<GeometrySpec>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_closest_point(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64) {
        let p = Vec3::new(x, y, z);
        prop_assume!(p.norm() > 1e-3);
        let r = AnalyticSurface::unit_sphere().closest_point(p).unwrap();
        prop_assert!((r.point - p / p.norm()).norm() < 1e-14);
        prop_assert!((r.distance - (p.norm() - 1.0).abs()).abs() < 1e-14);
    }

    #[test]
    fn torus_closest_point_is_stationary(a in 0.0..std::f64::consts::TAU, b in 0.0..std::f64::consts::TAU, off in -0.25..0.25f64) {
        let t = AnalyticSurface::torus(1.0, 0.3);
        let on = Vec3::new((1.0 + 0.3 * b.cos()) * a.cos(), (1.0 + 0.3 * b.cos()) * a.sin(), 0.3 * b.sin());
        let n = Vec3::new(b.cos() * a.cos(), b.cos() * a.sin(), b.sin());
        let r = t.closest_point(on + n * off).unwrap();
        prop_assert!((r.point - on).norm() < 1e-12);
        prop_assert!((r.distance - off.abs()).abs() < 1e-12);
    }

    #[test]
    fn double_sphere_distance_is_a_minimum(x in -1.5..2.0f64, y in -1.5..1.5f64, z in -1.5..1.5f64) {
        let d = AnalyticSurface::double_sphere();
        let p = Vec3::new(x, y, z);
        let r = d.closest_point(p).unwrap();
        // no sampled surface point is closer
        for i in 0..40 {
            for j in 0..20 {
                let (th, ph) = (i as f64 * 0.157, j as f64 * 0.157);
                let dir = Vec3::new(ph.cos(), th.cos() * ph.sin(), th.sin() * ph.sin());
                for c in [Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0)] {
                    let q = c + dir;
                    if d.closest_point(q).unwrap().distance < 1e-12 {
                        prop_assert!((q - p).norm() >= r.distance - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn helix_closest_point(t in 0.05..6.2f64, off in -0.01..0.01f64) {
        let c = AnalyticCurve::helix();
        let on = Vec3::new(t * (6.0 * t).cos(), t * (6.0 * t).sin(), t);
        let tan = Vec3::new((6.0 * t).cos() - 6.0 * t * (6.0 * t).sin(), (6.0 * t).sin() + 6.0 * t * (6.0 * t).cos(), 1.0);
        let nrm = tan.cross(&Vec3::z()).normalize();
        let r = c.closest_point(on + nrm * off).unwrap();
        prop_assert!(r.distance <= off.abs() + 1e-12);
    }
}
