use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use opgeom::cocycle::*;
use opgeom::geometry::{ParamSurface, QuadratureRule, SampledSurface};
use opgeom::Verdict;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sampled(s: &Arc<ParamSurface>, n: usize) -> SampledSurface {
    SampledSurface::new(s, QuadratureRule::new(n).unwrap()).unwrap()
}

fn rule(n: usize) -> QuadratureRule {
    QuadratureRule::new(n).unwrap()
}

fn sphere() -> Arc<ParamSurface> {
    Arc::new(ParamSurface::sphere())
}

fn torus() -> Arc<ParamSurface> {
    Arc::new(ParamSurface::torus(2.0, 1.0).unwrap())
}

fn gauss(s: &Arc<ParamSurface>) -> [SurfaceFunction; 3] {
    [0, 1, 2].map(|i| SurfaceFunction::gauss_component(s.clone(), i))
}

fn one(s: &Arc<ParamSurface>) -> SurfaceFunction {
    SurfaceFunction::constant(s.clone(), Complex64::new(1.0, 0.0))
}

#[test]
fn exact_forms_integrate_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in [sphere(), torus()] {
        let q = sampled(&s, 64);
        for _ in 0..10 {
            let f = random_function(s.clone(), &mut rng);
            let g = random_function(s.clone(), &mut rng);
            assert!(tau(&one(&s), &f, &g, &q).unwrap().norm() < 1e-8);
            assert!(tau(&f, &f, &f, &q).unwrap().norm() < 1e-10);
            assert!(tau(&g, &f, &f, &q).unwrap().norm() < 1e-10);
        }
    }
}

#[test]
fn gauss_components_on_the_sphere() {
    let s = sphere();
    let q = sampled(&s, 64);
    let [f, g, h] = gauss(&s);
    let t = tau(&f, &g, &h, &q).unwrap();
    assert!((t - Complex64::new(4.0 * PI / 3.0, 0.0)).norm() < 1e-6);
    assert!(cyclic_defect(&f, &g, &h, &q).unwrap() < 1e-8);
}

#[test]
fn unital_hochschild_reduces_to_cancellation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in [sphere(), torus()] {
        let q = sampled(&s, 48);
        let f: Vec<_> = (0..3).map(|_| random_function(s.clone(), &mut rng)).collect();
        assert!(hochschild_defect(&one(&s), &f[0], &f[1], &f[2], &q).unwrap() < 1e-8);
    }
}

#[test]
fn partials_agree_with_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in [sphere(), torus()] {
        let f = random_function(s.clone(), &mut rng);
        let (u, v, h) = (1.2, 0.4, 1e-6);
        let at = |u: f64, v: f64| f.eval(&s.gauss_map(0, u, v).unwrap());
        let c = at(u, v);
        let du = (at(u + h, v).val - at(u - h, v).val) / (2.0 * h);
        let dv = (at(u, v + h).val - at(u, v - h).val) / (2.0 * h);
        assert!((du - c.du).norm() < 1e-6);
        assert!((dv - c.dv).norm() < 1e-6);
    }
}

#[test]
fn matrix_extension_chains() {
    let s = sphere();
    let q = sampled(&s, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = random_function(s.clone(), &mut rng);
    let scalar = Mat2Field::scalar(f.clone());
    let t = tau_mat2(&scalar, &scalar, &scalar, &q).unwrap();
    assert!((t - tau(&f, &f, &f, &q).unwrap() * 2.0).norm() < 1e-10);
    assert!(t.norm() < 1e-10);

    let d: Vec<SurfaceFunction> = (0..6).map(|_| random_function(s.clone(), &mut rng)).collect();
    let a = Mat2Field::diagonal(d[0].clone(), d[1].clone());
    let b = Mat2Field::diagonal(d[2].clone(), d[3].clone());
    let c = Mat2Field::diagonal(d[4].clone(), d[5].clone());
    let lhs = tau_mat2(&a, &b, &c, &q).unwrap();
    let rhs = tau(&d[0], &d[2], &d[4], &q).unwrap() + tau(&d[1], &d[3], &d[5], &q).unwrap();
    assert!((lhs - rhs).norm() < 1e-12);

    for _ in 0..5 {
        let m: Vec<Mat2Field> = (0..3).map(|_| random_matrix(s.clone(), &mut rng)).collect();
        let q = sampled(&s, 64);
        let d = tau_mat2(&m[0], &m[1], &m[2], &q).unwrap() - tau_mat2(&m[1], &m[2], &m[0], &q).unwrap();
        assert!(d.norm() < 1e-8);
    }
}

#[test]
fn identity_reports_pass_and_converge() {
    for s in [sphere(), torus()] {
        let rep = identity_residuals(&s, rule(64), 50, 2024).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
    }
    // At coarse resolution the cyclic residual is truncation error and must
    // shrink under doubling.
    let rep = identity_residuals(&sphere(), rule(16), 20, 9).unwrap();
    assert!(rep.levels[0].cyclic > 1e-6);
    assert!(rep.levels[1].cyclic <= rep.levels[0].cyclic / 4.0);
    assert_eq!(rep.verdict, Verdict::Pass);
}

#[test]
fn bott_projection_is_a_projection() {
    let surfaces = [
        sphere(),
        torus(),
        Arc::new(ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap()),
        Arc::new(ParamSurface::bumped_sphere(0.1, 1).unwrap()),
    ];
    for s in surfaces {
        let e = bott_projection(s.clone());
        assert!(projection_defect(&e, &sampled(&s, 64)) < 1e-12);
    }
}

#[test]
fn bott_eigenvalues_are_zero_and_one() {
    let s = Arc::new(ParamSurface::bumped_sphere(0.2, 3).unwrap());
    let e = bott_projection(s.clone());
    let q = sampled(&s, 10);
    assert_eq!(q.samples.len(), 100);
    for node in &q.samples {
        let m = e.eval(node);
        let tr = m[0][0].val + m[1][1].val;
        let det = m[0][0].val * m[1][1].val - m[0][1].val * m[1][0].val;
        let disc = (tr * tr - det * 4.0).sqrt();
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        assert!((l1 - 1.0).norm() < 1e-12 && l2.norm() < 1e-12);
    }
}

#[test]
fn literal_form_is_not_a_projection() {
    let s = sphere();
    let d = projection_defect(&literal_bott_form(s.clone()), &sampled(&s, 64));
    assert!(d > 0.1);
    // analytic maximum |h| sqrt(1 - h^2) / 2 = 1/4 at h = 1/sqrt(2)
    assert!(d <= 0.25 + 1e-12 && d > 0.249);
}

#[test]
fn lambda_matches_symbolic_fixture() {
    let sym = symbolic_lambda();
    assert!(sym.consistent);
    let fixture = Complex64::new(sym.lambda_f64[0], sym.lambda_f64[1]);
    let coarse = lambda_estimate(&ParamSurface::sphere(), rule(64)).unwrap().lambda();
    let fine = lambda_estimate(&ParamSurface::sphere(), rule(128)).unwrap().lambda();
    assert!((coarse - fine).norm() < 1e-7);
    assert!((fine - fixture).norm() < 1e-9);
    let others = [
        ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap(),
        ParamSurface::bumped_sphere(0.1, 1).unwrap(),
        ParamSurface::ellipsoid(0.5, 1.0, 1.5).unwrap().rotated([1.0, 0.0, 1.0], 0.3),
    ];
    for s in others {
        let est = lambda_estimate(&s, rule(64)).unwrap();
        assert!((est.lambda() - coarse).norm() < 1e-6, "{:?}", s.kind);
        let tau2 = Complex64::new(est.tau2[0], est.tau2[1]);
        assert!((tau2 - fixture * est.fdgdh).norm() < 1e-6);
    }
}

#[test]
fn lambda_guard_on_the_torus() {
    let err = lambda_estimate(&ParamSurface::torus(2.0, 1.0).unwrap(), rule(32)).unwrap_err();
    assert!(matches!(err, CocycleError::DegenerateDenominator(_)));
}

#[test]
fn stability_along_curves() {
    let r = rule(64);
    let bumped = ProjectionCurve::new(CurveFamily::BumpedSphere { k: 1 }, 0.2, 11).unwrap();
    let rep = stability_check(&bumped, r).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.max_tau_deviation < 1e-6 && rep.max_curvature_deviation < 1e-6);
    assert_eq!(rep.samples.len(), 11);

    let constant = ProjectionCurve::new(CurveFamily::Constant, 0.2, 5).unwrap();
    assert!(stability_check(&constant, r).unwrap().max_tau_deviation < 1e-12);

    let rotated = ProjectionCurve::new(CurveFamily::RotatedSphere { axis: [1.0, 2.0, 2.0], speed: 3.0 }, 1.0, 6).unwrap();
    assert_eq!(stability_check(&rotated, r).unwrap().verdict, Verdict::Pass);
}

#[test]
fn commutator_structure() {
    let r = rule(16);
    let bumped = ProjectionCurve::new(CurveFamily::BumpedSphere { k: 1 }, 0.2, 11).unwrap();
    let rep = commutator_structure_check(&bumped, 0.1, 1e-3, r).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.idempotent_residual[0] < 1e-4 && rep.commutator_residual[0] < 1e-4);
    assert!(rep.idempotent_ratio >= 3.5 && rep.commutator_ratio >= 3.5);

    let constant = ProjectionCurve::new(CurveFamily::Constant, 0.2, 11).unwrap();
    let rep = commutator_structure_check(&constant, 0.1, 1e-3, r).unwrap();
    assert_eq!(rep.idempotent_residual, [0.0, 0.0]);
    assert_eq!(rep.verdict, Verdict::Pass);

    let corrupted = ProjectionCurve::new(CurveFamily::Corrupted { k: 1, amount: 0.5 }, 0.2, 11).unwrap();
    let rep = commutator_structure_check(&corrupted, 0.1, 1e-3, r).unwrap();
    assert!(rep.idempotent_residual[0] > 1e-2);
    assert_eq!(rep.verdict, Verdict::Fail);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tau_is_trilinear(seed in any::<u64>(), ar in -2.0..2.0f64, ai in -2.0..2.0f64, br in -2.0..2.0f64, bi in -2.0..2.0f64) {
        let s = torus();
        let q = sampled(&s, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<_> = (0..4).map(|_| random_function(s.clone(), &mut rng)).collect();
        let (alpha, beta) = (Complex64::new(ar, ai) / 1.5, Complex64::new(br, bi) / 1.5);
        let combo = f[0].scale(alpha).add(&f[3].scale(beta));
        let lhs = tau(&combo, &f[1], &f[2], &q).unwrap();
        let rhs = tau(&f[0], &f[1], &f[2], &q).unwrap() * alpha + tau(&f[3], &f[1], &f[2], &q).unwrap() * beta;
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn tau_vanishes_on_repeated_arguments(seed in any::<u64>()) {
        let s = sphere();
        let q = sampled(&s, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f0 = random_function(s.clone(), &mut rng);
        let f = random_function(s.clone(), &mut rng);
        prop_assert!(tau(&f0, &f, &f, &q).unwrap().norm() < 1e-10);
    }
}
