use std::f64::consts::PI;

use opgeom::geometry::{
    gauss_bonnet_check, integrate_curvature, integrate_fdgdh, ComponentOrder, ParamSurface,
    QuadratureRule, Rule1D, SampledSurface,
};

fn rule(n: usize) -> QuadratureRule {
    QuadratureRule::new(n).unwrap()
}

fn builtins() -> Vec<ParamSurface> {
    vec![
        ParamSurface::sphere(),
        ParamSurface::torus(2.0, 1.0).unwrap(),
        ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap(),
        ParamSurface::bumped_sphere(0.1, 1).unwrap(),
    ]
}

#[test]
fn sphere_and_torus_totals() {
    let k = integrate_curvature(&ParamSurface::sphere(), rule(64)).unwrap();
    assert!((k - 4.0 * PI).abs() < 1e-6, "sphere {k}");
    let k = integrate_curvature(&ParamSurface::torus(2.0, 1.0).unwrap(), rule(64)).unwrap();
    assert!(k.abs() < 1e-6, "torus {k}");
}

/// Closed-form curvature of the ellipsoid times the area element, integrated
/// with a rule built here, not through the Gauss map.
fn ellipsoid_oracle(a: f64, b: f64, c: f64, n: usize) -> f64 {
    let th = Rule1D::gauss_legendre(n, 0.0, PI);
    let mut total = 0.0;
    for (t, wt) in th.nodes.iter().zip(&th.weights) {
        for j in 0..n {
            let p = 2.0 * PI * (j as f64 + 0.5) / n as f64;
            let (x, y, z) = (a * t.sin() * p.cos(), b * t.sin() * p.sin(), c * t.cos());
            let q = x * x / a.powi(4) + y * y / b.powi(4) + z * z / c.powi(4);
            let k = 1.0 / (a * a * b * b * c * c * q * q);
            let cross = [
                b * c * t.sin() * t.sin() * p.cos(),
                a * c * t.sin() * t.sin() * p.sin(),
                a * b * t.sin() * t.cos(),
            ];
            let da = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
            total += wt * (2.0 * PI / n as f64) * k * da;
        }
    }
    total
}

#[test]
fn ellipsoid_matches_closed_form_oracle() {
    let e = ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap();
    let k = integrate_curvature(&e, rule(96)).unwrap();
    let oracle = ellipsoid_oracle(1.0, 1.0, 2.0, 96);
    assert!((k - oracle).abs() < 1e-9, "{k} vs oracle {oracle}");
    assert!((k - 4.0 * PI).abs() < 1e-6);
    let k = integrate_curvature(&ParamSurface::ellipsoid(0.7, 1.3, 2.1).unwrap(), rule(96)).unwrap();
    assert!((k - ellipsoid_oracle(0.7, 1.3, 2.1, 96)).abs() < 1e-9);
}

#[test]
fn fdgdh_orderings() {
    let r = rule(64);
    let s = ParamSurface::sphere();
    let vals = ComponentOrder::ALL.map(|o| integrate_fdgdh(&s, o, r).unwrap());
    for v in vals {
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-6);
    }
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        assert!((vals[a] - vals[b]).abs() < 1e-8);
    }
    let t = ParamSurface::torus(2.0, 1.0).unwrap();
    for o in ComponentOrder::ALL {
        assert!(integrate_fdgdh(&t, o, r).unwrap().abs() < 1e-6);
    }
}

#[test]
fn stokes_and_curvature_identities_on_every_builtin() {
    for s in builtins() {
        let rep = gauss_bonnet_check(&s, rule(64)).unwrap();
        let scale = rep.fdgdh.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(
            rep.max_ordering_deviation < 1e-8 * scale + 1e-12,
            "{}: {}",
            rep.surface,
            rep.max_ordering_deviation
        );
        assert!(rep.curvature_identity_residual < 1e-6, "{}", rep.surface);
    }
}

#[test]
fn bumped_sphere_keeps_total_curvature() {
    let s = ParamSurface::bumped_sphere(0.1, 1).unwrap();
    let rep = gauss_bonnet_check(&s, rule(128)).unwrap();
    assert!(rep.residual < 1e-5, "{}", rep.residual);
    // refined-grid self-convergence
    let fine = integrate_curvature(&s, rule(192)).unwrap();
    assert!((fine - rep.total_curvature).abs() < 1e-9);
    for (k, n) in [(2, 128), (3, 128), (4, 256)] {
        let s = ParamSurface::bumped_sphere(0.3, k).unwrap();
        assert!(gauss_bonnet_check(&s, rule(n)).unwrap().residual < 1e-6, "k={k}");
    }
}

#[test]
fn unit_normal_invariant() {
    for s in builtins() {
        let sampled = SampledSurface::new(&s, rule(64)).unwrap();
        assert!(sampled.max_unit_defect() < 1e-12);
    }
}

#[test]
fn residual_shrinks_under_doubling() {
    // Below 1e-12 the residual is rounding noise and cannot keep shrinking.
    const FLOOR: f64 = 1e-12;
    let surfaces = [
        ParamSurface::sphere(),
        ParamSurface::torus(2.0, 1.0).unwrap(),
        ParamSurface::torus(3.0, 2.5).unwrap(),
        ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap(),
    ];
    for s in surfaces {
        let mut prev = gauss_bonnet_check(&s, rule(4)).unwrap().residual;
        for n in [8, 16, 32, 64] {
            let r = gauss_bonnet_check(&s, rule(n)).unwrap().residual;
            assert!(r <= (prev / 4.0).max(FLOOR), "{:?} n={n}: {prev} -> {r}", s.kind);
            prev = r;
        }
    }
}

#[test]
fn weights_sum_to_chart_measure() {
    for s in builtins() {
        let nodes = rule(12).nodes(&s);
        let total: f64 = nodes.iter().map(|n| n.weight).sum();
        let measure: f64 = s.charts.iter().map(|c| (c.u.1 - c.u.0) * (c.v.1 - c.v.0)).sum();
        assert!((total - measure).abs() < 1e-12);
        assert!(nodes.iter().all(|n| n.weight > 0.0));
    }
}
