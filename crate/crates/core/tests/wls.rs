mod common;

use common::{exponents, jittered_points, poly_eval, poly_grad};
use hosr::wls::{
    assemble_curve_system, assemble_system, monomial_count, solve_truncated_qrcp, wendland_weight, FitResult,
    DEFAULT_COND_LIMIT,
};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn random_poly(p: usize, rng: &mut StdRng) -> (Vec<(usize, usize)>, Vec<f64>) {
    let terms = exponents(p);
    let c = terms.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    (terms, c)
}

fn fit_poly(p: usize, hermite: bool, pts: &[[f64; 2]], c: &[f64], terms: &[(usize, usize)], h: f64) -> FitResult {
    let heights: Vec<f64> = pts.iter().map(|q| poly_eval(c, terms, q[0], q[1])).collect();
    let grads: Vec<Option<[f64; 2]>> = pts
        .iter()
        .map(|q| hermite.then(|| poly_grad(c, terms, q[0], q[1])))
        .collect();
    let w = vec![1.0; pts.len()];
    let sys = assemble_system(pts, &heights, &grads, &w, p, h, false).unwrap();
    solve_truncated_qrcp(&sys, DEFAULT_COND_LIMIT).unwrap()
}

#[test]
fn random_polynomials_are_reproduced() {
    let mut rng = StdRng::seed_from_u64(7);
    for p in 1..=6 {
        for hermite in [false, true] {
            for _ in 0..20 {
                let (terms, c) = random_poly(p, &mut rng);
                let n = if hermite { 5 } else { p + 3 };
                let pts = jittered_points(n, 0.05, &mut rng);
                let fit = fit_poly(p, hermite, &pts, &c, &terms, 0.5);
                assert!(fit.truncated_terms.is_empty());
                for (t, a) in terms.iter().zip(&c) {
                    let got = fit.coeff(0, t.0, t.1);
                    assert!(
                        (got - a).abs() < 1e-9,
                        "p={p} hermite={hermite} term {t:?}: {got} vs {a}"
                    );
                }
            }
        }
    }
}

#[test]
fn curve_polynomials_are_reproduced() {
    let mut rng = StdRng::seed_from_u64(11);
    for p in 1..=6 {
        let cv: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cw: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ev = |c: &[f64], u: f64| c.iter().enumerate().map(|(q, a)| a * u.powi(q as i32)).sum::<f64>();
        let dv = |c: &[f64], u: f64| {
            c.iter()
                .enumerate()
                .skip(1)
                .map(|(q, a)| a * q as f64 * u.powi(q as i32 - 1))
                .sum::<f64>()
        };
        let us: Vec<f64> = (0..2 * p + 3)
            .map(|i| -1.0 + 2.0 * i as f64 / (2 * p + 2) as f64)
            .collect();
        let heights: Vec<[f64; 2]> = us.iter().map(|&u| [ev(&cv, u), ev(&cw, u)]).collect();
        let slopes: Vec<Option<[f64; 2]>> = us.iter().map(|&u| Some([dv(&cv, u), dv(&cw, u)])).collect();
        let sys = assemble_curve_system(&us, &heights, &slopes, &vec![1.0; us.len()], p, 0.5, false).unwrap();
        let fit = solve_truncated_qrcp(&sys, DEFAULT_COND_LIMIT).unwrap();
        for q in 0..=p {
            assert!((fit.coeff(0, q, 0) - cv[q]).abs() < 1e-9);
            assert!((fit.coeff(1, q, 0) - cw[q]).abs() < 1e-9);
        }
    }
}

#[test]
fn collinear_points_truncate_instead_of_failing() {
    let pts: Vec<[f64; 2]> = (0..9).map(|i| [-1.0 + 0.25 * i as f64, 0.0]).collect();
    let heights: Vec<f64> = pts.iter().map(|q| q[0] * q[0]).collect();
    let sys = assemble_system(&pts, &heights, &vec![None; 9], &[1.0; 9], 2, 0.5, false).unwrap();
    let fit = solve_truncated_qrcp(&sys, DEFAULT_COND_LIMIT).unwrap();
    assert!(fit.truncated_terms.contains(&(0, 1)));
    assert!(fit.truncated_terms.contains(&(0, 2)));
    assert!((fit.coeff(0, 2, 0) - 1.0).abs() < 1e-12);
    assert!(fit.coefficients[0].iter().all(|c| c.is_finite()));
}

#[test]
fn coincident_points_do_not_crash() {
    let pts = vec![[0.2, 0.1]; 8];
    let sys = assemble_system(&pts, &[0.3; 8], &[None; 8], &[1.0; 8], 3, 1.0, false).unwrap();
    let fit = solve_truncated_qrcp(&sys, DEFAULT_COND_LIMIT).unwrap();
    assert_eq!(fit.effective_degree, 0);
    assert!((fit.eval(0.2, 0.1) - 0.3).abs() < 1e-12);
}

#[test]
fn wendland_values() {
    assert_eq!(wendland_weight(0.0, 2), 1.0);
    assert_eq!(wendland_weight(0.0, 4), 3.0);
    assert_eq!(wendland_weight(0.0, 6), 1.0);
    // ψ₃,₁(0.5) = 0.5⁴ · 3
    assert!((wendland_weight(0.5, 2) - 0.1875).abs() < 1e-15);
    for p in [2, 4, 6] {
        assert_eq!(wendland_weight(1.0, p), 0.0);
        assert_eq!(wendland_weight(1.7, p), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wendland_is_monotone(a in 0.0..1.0f64, b in 0.0..1.0f64, p in 1usize..8) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(wendland_weight(lo, p) >= wendland_weight(hi, p));
        prop_assert!(wendland_weight(hi, p) >= 0.0);
    }

    #[test]
    fn reproduction_is_scale_invariant(seed in 0u64..1000, p in 1usize..5, h in 0.05..5.0f64, scale in 0.01..10.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (terms, c) = random_poly(p, &mut rng);
        let pts: Vec<[f64; 2]> = jittered_points(p + 3, 0.05, &mut rng)
            .into_iter()
            .map(|q| [q[0] * scale, q[1] * scale])
            .collect();
        let fit = fit_poly(p, false, &pts, &c, &terms, h * scale);
        for (i, q) in pts.iter().enumerate().step_by(3) {
            let exact = poly_eval(&c, &terms, q[0], q[1]);
            prop_assert!((fit.eval(q[0], q[1]) - exact).abs() < 1e-8 * (1.0 + exact.abs()), "point {i}");
        }
    }

    #[test]
    fn uniform_weight_scaling_leaves_fit_unchanged(seed in 0u64..1000, w in 0.01..100.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let pts = jittered_points(5, 0.1, &mut rng);
        let heights: Vec<f64> = pts.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let none = vec![None; pts.len()];
        let a = assemble_system(&pts, &heights, &none, &vec![1.0; pts.len()], 2, 1.0, false).unwrap();
        let b = assemble_system(&pts, &heights, &none, &vec![w; pts.len()], 2, 1.0, false).unwrap();
        let fa = solve_truncated_qrcp(&a, DEFAULT_COND_LIMIT).unwrap();
        let fb = solve_truncated_qrcp(&b, DEFAULT_COND_LIMIT).unwrap();
        for (x, y) in fa.coefficients[0].iter().zip(&fb.coefficients[0]) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn monomial_counts(p in 0usize..12) {
        prop_assert_eq!(monomial_count(p), exponents(p).len());
    }
}
