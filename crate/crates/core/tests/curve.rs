mod common;

use hosr::curve::{estimate_tangents, split_chain, CurveReconstructor, TangentSource};
use hosr::geometry::{helix_polyline, AnalyticCurve};
use hosr::mesh::{Chain, FeatureTags};
use hosr::surface::{Method, MethodConfig};
use hosr::Vec3;
use proptest::prelude::*;

const METHODS: [Method; 4] = [Method::Cmf, Method::Walf, Method::HCmf, Method::HWalf];

#[test]
fn cube_chains_meet_at_corners() {
    let m = common::cube(4);
    let m = m.clone().with_features(&FeatureTags::from_dihedral(&m, 30.0)).unwrap();
    for method in METHODS {
        let rec = CurveReconstructor::from_mesh(&m, TangentSource::Estimated, MethodConfig::new(method, 4)).unwrap();
        assert_eq!(rec.chains().len(), 12);
        for (c, ch) in rec.chains().iter().enumerate() {
            let first = m.vertex(ch.vertices[0]);
            let last = m.vertex(*ch.vertices.last().unwrap());
            assert!((rec.project(c, 0, 0.0).unwrap() - first).norm() < 1e-13);
            assert!((rec.project(c, ch.num_edges() - 1, 1.0).unwrap() - last).norm() < 1e-13);
            // straight cube edges stay straight
            let q = rec.project(c, 1, 0.37).unwrap();
            assert!(((q - first).cross(&(last - first))).norm() < 1e-12);
        }
    }
}

#[test]
fn helix_rates() {
    let curve = AnalyticCurve::helix();
    for (method, p, min_rate) in [(Method::Cmf, 2, 3.5), (Method::HCmf, 4, 4.5), (Method::HWalf, 4, 4.5)] {
        let mut errs = Vec::new();
        for level in 1..=2 {
            let poly = helix_polyline(level).unwrap();
            let rec = CurveReconstructor::from_helix(&poly, true, MethodConfig::new(method, p)).unwrap();
            let mut e2 = 0.0;
            let n = poly.points.len() - 1;
            for e in 0..n {
                let q = rec.project(0, e, 0.5).unwrap();
                e2 += curve.closest_point(q).unwrap().distance.powi(2);
            }
            errs.push((e2 / n as f64).sqrt());
        }
        let rate = (errs[0] / errs[1]).log2();
        assert!(rate >= min_rate, "{method} p={p}: {rate}");
    }
}

#[test]
fn tangents_follow_the_chain() {
    let pts: Vec<Vec3> = (0..5).map(|i| Vec3::new(i as f64, (i * i) as f64 * 0.1, 0.0)).collect();
    let ch = Chain {
        vertices: vec![0, 1, 2, 3, 4],
        closed: false,
    };
    let t = estimate_tangents(&pts, &ch).unwrap();
    assert!((t[0] - Vec3::new(1.0, 0.1, 0.0).normalize()).norm() < 1e-15);
    for w in t.windows(2) {
        assert!(w[0].dot(&w[1]) > 0.9);
    }
    let parts = split_chain(&ch, |v| v == 2);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].vertices, vec![0, 1, 2]);
    assert_eq!(parts[1].vertices, vec![2, 3, 4]);
}

#[test]
fn bad_edge_parameters_are_rejected() {
    let poly = helix_polyline(1).unwrap();
    let rec = CurveReconstructor::from_helix(&poly, true, MethodConfig::new(Method::HWalf, 2)).unwrap();
    assert!(rec.project(0, 0, 1.5).is_err());
    assert!(rec.project(0, 10_000, 0.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lines_are_reproduced(
        gaps in proptest::collection::vec(0.5..1.5f64, 12),
        dir in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        method in 0usize..4,
        p in 1usize..6,
        s in 0.0..1.0f64,
    ) {
        let d = Vec3::new(dir.0, dir.1, dir.2);
        prop_assume!(d.norm() > 0.1);
        let d = d.normalize();
        let mut u = 0.0;
        let mut pts = vec![Vec3::new(0.3, -0.2, 0.1)];
        for g in &gaps {
            u += g;
            pts.push(Vec3::new(0.3, -0.2, 0.1) + d * u);
        }
        let ch = Chain { vertices: (0..pts.len()).collect(), closed: false };
        let rec = CurveReconstructor::new(pts.clone(), vec![ch], TangentSource::Estimated, MethodConfig::new(METHODS[method], p)).unwrap();
        for e in 0..gaps.len() {
            let q = rec.project(0, e, s).unwrap();
            let x = q - pts[0];
            prop_assert!((x - d * x.dot(&d)).norm() < 1e-11);
        }
    }
}
