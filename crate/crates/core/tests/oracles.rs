//! Closed-form oracles derived independently of the engine.

use std::f64::consts::PI;

use lightlike_core::catalog;
use lightlike_core::curvature::{curvature_report, Tolerances};
use lightlike_core::grid::Grid;
use lightlike_core::normalized::{isothermal_identity_residual, normalized_report, ISOTHERMAL_TOL};
use lightlike_core::special::{embed, specialization_check, SliceKind};
use lightlike_core::surface::Domain;
use lightlike_core::variation::{
    area, first_variation_check, mean_curvature_derivative_check, second_variation_check, Direction, Profile,
    ScalarField, VariationSpec,
};

fn full_sphere(delta: f64) -> lightlike_core::surface::SurfacePatch {
    catalog::sphere(1.0).with_domain(Domain::new(delta, PI - delta, 0.0, 2.0 * PI))
}

#[test]
fn sphere_area_converges_at_simpson_rate() {
    // Exact area of the truncated sphere: 4 pi cos(delta).
    let delta: f64 = 0.1;
    let exact = 4.0 * PI * delta.cos();
    let errs: Vec<f64> =
        [9, 17, 33].iter().map(|&n| (area(&full_sphere(delta), (n, 5)).unwrap() - exact).abs()).collect();
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() > 3.5, "{errs:?}");
    }
}

#[test]
fn sphere_offsets_are_exact() {
    // nS is the inward normal, so l- = e0 - nS moves outward:
    // A(eps) = 4 pi cos(delta) (1 + eps)^2 for Minus and (1 - eps)^2 for Plus.
    let delta: f64 = 1e-3;
    let c = 4.0 * PI * delta.cos();
    for (dir, d1) in [(Direction::Minus, 2.0 * c), (Direction::Plus, -2.0 * c)] {
        let spec = VariationSpec::new(dir, ScalarField::constant(1.0)).with_grid(101, 101);
        let r = first_variation_check(&full_sphere(delta), &spec).unwrap();
        assert!((r.numeric_d1 - d1).abs() < 1e-6 * d1.abs(), "{r:?}");
        assert!((r.formula_d1 - d1).abs() < 1e-6 * d1.abs(), "{r:?}");
        assert!((r.numeric_d2 - 2.0 * c).abs() < 1e-4 * c, "{r:?}");
    }
}

#[test]
fn catenoid_second_variation() {
    // Minimal in R^3_0, so both lightlike directions are marginally trapped
    // and d^2A = 2 \int K dM = -8 pi tanh(1).
    let expect = -8.0 * PI * 1f64.tanh();
    for dir in [Direction::Plus, Direction::Minus] {
        let spec = VariationSpec::new(dir, ScalarField::constant(1.0)).with_grid(101, 101);
        let r = second_variation_check(&catalog::catenoid(), &spec).unwrap();
        assert!((r.formula_d2 - expect).abs() < 1e-6 * expect.abs(), "{r:?}");
        assert!((r.numeric_d2 - expect).abs() < 1e-4 * expect.abs(), "{r:?}");
        assert!(r.formula_d1.abs() < 1e-10 && r.numeric_d1.abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn first_variation_order_is_quadratic() {
    let errs: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| {
            let mut spec = VariationSpec::new(Direction::Minus, ScalarField::constant(1.0))
                .with_grid(21, 21)
                .with_profile(Profile::Sine);
            spec.epsilons = vec![-h, 0.0, h];
            let r = first_variation_check(&full_sphere(0.1), &spec).unwrap();
            r.residual_d1
        })
        .collect();
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() > 1.8, "{errs:?}");
    }
}

#[test]
fn mean_curvature_derivative_on_mt_graph() {
    // With H_l = 0 the derivative reduces to -a K_l.
    let p = catalog::graph_harmonic();
    let alpha = ScalarField::parse("1 + u1/4").unwrap();
    for dir in [Direction::Plus, Direction::Minus] {
        let spec = VariationSpec::new(dir, alpha.clone());
        let (a, b) = (0.3, -0.2);
        let m = mean_curvature_derivative_check(&p, &spec, a, b).unwrap();
        let r = curvature_report(&p, a, b, &Tolerances::default()).unwrap();
        let k = r.scalars.lightcone(dir.sign()).0;
        assert!((m.rhs + alpha.eval(a, b) * k).abs() < 1e-9, "{m:?}");
        assert!(m.relative(1e-8) < 1e-4, "{m:?}");
    }
}

#[test]
fn harmonic_graph_lightcone_curvatures() {
    // For (f, f, u1, u2) the metric is the identity, so the surface is
    // isothermal; the Laplacian vanishes exactly when f is harmonic.
    for (p, harmonic) in [(catalog::graph_exp_harmonic(), true), (catalog::graph_nonharmonic(), false)] {
        let grid = Grid::new(p.domain, 7, 7);
        for (a, b) in grid.nodes() {
            let r = curvature_report(&p, a, b, &Tolerances::default()).unwrap();
            let n = normalized_report(&r).unwrap();
            assert!((n.ell0_plus - n.ell0_minus).abs() < 1e-12);
            let res = isothermal_identity_residual(&r, &n, ISOTHERMAL_TOL).unwrap();
            assert!(res.equal_time_form.euclid_norm() < 1e-10);
            let both_zero = n.h_tilde_plus.abs() < 1e-10 && n.h_tilde_minus.abs() < 1e-10;
            assert_eq!(both_zero, harmonic);
        }
    }
}

#[test]
fn hyperbolic_sphere_mean_curvature() {
    // Geodesic sphere of radius rho in H^3: |H| = coth(rho).
    let rho: f64 = 0.8;
    let s = embed(SliceKind::Hyperbolic3, catalog::hyperbolic_sphere(rho), 9).unwrap();
    let r = curvature_report(&s.patch, 1.0, 2.0, &Tolerances::default()).unwrap();
    assert!((r.scalars.h_t + 1.0).abs() < 1e-12);
    assert!((r.scalars.h_s.abs() - 1.0 / rho.tanh()).abs() < 1e-12);
    assert!(specialization_check(&s, 9, 9, &Tolerances::default()).unwrap().max_residual() < 1e-7);
}

#[test]
fn horosphere_is_cmc_one() {
    let s = embed(SliceKind::Hyperbolic3, catalog::hyperbolic_horosphere(), 9).unwrap();
    let r = curvature_report(&s.patch, 0.4, -0.3, &Tolerances::default()).unwrap();
    assert!((r.scalars.h_s.abs() - 1.0).abs() < 1e-12);
    // One lightcone mean curvature vanishes: marginally trapped, flat.
    assert!(r.flags().marginally_trapped && !r.flags().strongly_marginally_trapped);
    assert!(r.k_intrinsic.abs() < 1e-12);
}
