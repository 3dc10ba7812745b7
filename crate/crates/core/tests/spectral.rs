use opgeom::algebra::*;
use opgeom::spectral::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn op(s: &str) -> WeylOp {
    parse_weyl(s).unwrap()
}

fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

fn random_op(rng: &mut impl Rng, max: u32) -> WeylOp {
    let n = rng.gen_range(1..=3);
    WeylOp::from_terms((0..n).map(|_| {
        let a = rng.gen_range(0..=max);
        let b = rng.gen_range(0..=max - a);
        let p = rng.gen_range(0..=max);
        let q = rng.gen_range(0..=max - p);
        let c = GaussianRational::from_parts((rng.gen_range(-5..=5), rng.gen_range(1..=3)), (rng.gen_range(-5..=5), 1));
        (a, b, p, q, c)
    }))
}

/// `i[(ax+dy)ξ² + (bx+ey)ξη + (cx+fy)η²]`, assembled by hand.
fn hand_symbol([a, b, c, d, e, f]: [i64; 6]) -> SymbolPoly {
    let lin = |u: i64, v: i64| parse_poly(&format!("({u}i)*x + ({v}i)*y")).unwrap();
    SymbolPoly::from_terms([(2, 0, lin(a, d)), (1, 1, lin(b, e)), (0, 2, lin(c, f))])
}

#[test]
fn conjugation_examples() {
    assert_eq!(conjugate(&WeylOp::dx()), op("-i*x"));
    let c = conjugate(&op("x^2*dx"));
    assert_eq!(c, op("i*x*dx^2 + 2i*dx"));
    assert_eq!(principal_symbol(&c).unwrap(), SymbolPoly::from_terms([(2, 0, parse_poly("i*x").unwrap())]));
}

#[test]
fn quadratic_fields_have_the_expected_principal_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let coeffs: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let [a, b, c, d, e, f] = coeffs;
        let p = parse_poly(&format!("({a})*x^2 + ({b})*x*y + ({c})*y^2")).unwrap();
        let q = parse_poly(&format!("({d})*x^2 + ({e})*x*y + ({f})*y^2")).unwrap();
        let s = principal_symbol(&conjugate(&WeylOp::from_field(&p, &q))).unwrap();
        assert_eq!(s, hand_symbol(coeffs), "{coeffs:?}");
    }
}

#[test]
fn conjugation_is_multiplicative_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_op(&mut rng, 3);
        let b = random_op(&mut rng, 3);
        assert!(conjugation_is_homomorphism_check(&a, &b).unwrap(), "{a} / {b}");
    }
}

#[test]
fn canonical_commutation_is_preserved() {
    let ccr = &WeylOp::dx().compose(&WeylOp::x()) - &WeylOp::x().compose(&WeylOp::dx());
    assert_eq!(ccr, WeylOp::identity());
    assert_eq!(conjugate(&ccr), WeylOp::identity());
    let ccr_y = &WeylOp::dy().compose(&WeylOp::y()) - &WeylOp::y().compose(&WeylOp::dy());
    assert_eq!(conjugate(&ccr_y), WeylOp::identity());
}

#[test]
fn order_and_coefficient_degree_swap() {
    for s in ["dx", "x^2*dx", "x*dx + y*dy", "(1+i)*x*y^2*dy - dx^2", "x^3 + dy^2", "y*dx - x*dy"] {
        let d = op(s);
        let c = conjugate(&d);
        assert_eq!(c.order(), d.coefficient_degree(), "{s}");
        assert_eq!(c.coefficient_degree(), d.order(), "{s}");
    }
}

#[test]
fn principal_symbol_examples() {
    let s = |t: &str| principal_symbol(&op(t)).unwrap();
    assert_eq!(s("x*dx + y*dy"), SymbolPoly::from_terms([(1, 0, parse_poly("x").unwrap()), (0, 1, parse_poly("y").unwrap())]));
    assert_eq!(s("dx^2 + dy^2"), SymbolPoly::from_terms([(2, 0, Poly2::one()), (0, 2, Poly2::one())]));
}

#[test]
fn shipped_symbol_ellipticity() {
    let (p, q) = quadratic_field([1, 0, 1, 0, 0, 1]);
    let s = principal_symbol(&conjugate(&WeylOp::from_field(&p, &q))).unwrap();
    // A = x, B = 0, C = x + y after removing the factor i: B² − 4AC = −4x² − 4xy.
    let (phase, disc) = discriminant(&s).unwrap();
    assert_eq!(phase, Some(1));
    assert_eq!(disc, parse_poly("-4*x^2 - 4*x*y").unwrap());
    assert_eq!(classify_at(&s, &int(1), &int(0)).unwrap(), Ellipticity::Elliptic);
    assert_eq!(classify_at(&s, &int(0), &int(1)).unwrap(), Ellipticity::Degenerate);

    let report = ellipticity_report(&s, &Region::symmetric(2), 5).unwrap();
    assert_eq!(report.discriminant, "-4*x^2 - 4*x*y");
    assert_eq!(report.samples.len(), 25);
    for g in &report.samples {
        let d = -4.0 * g.x_f64 * g.x_f64 - 4.0 * g.x_f64 * g.y_f64;
        assert_eq!(d, g.discriminant_f64);
        let expected = if d < 0.0 { Ellipticity::Elliptic } else if d == 0.0 { Ellipticity::Degenerate } else { Ellipticity::Indefinite };
        assert_eq!(g.verdict, expected, "({}, {})", g.x, g.y);
    }
    assert!(report.degenerate_points.contains(&("0".into(), "0".into())));
}

#[test]
fn laplacian_is_elliptic_on_the_whole_grid() {
    let s = principal_symbol(&op("dx^2 + dy^2")).unwrap();
    let r = ellipticity_report(&s, &Region::symmetric(3), 7).unwrap();
    assert_eq!(r.elliptic_count, 49);
}

#[test]
fn degenerate_line_through_the_origin_is_reported() {
    // b = e = 0 and A, C both proportional to x + y.
    let (p, q) = quadratic_field([2, 0, 3, 2, 0, 3]);
    let s = principal_symbol(&conjugate(&WeylOp::from_field(&p, &q))).unwrap();
    let (_, disc) = discriminant(&s).unwrap();
    assert_eq!(disc, parse_poly("-24*x^2 - 48*x*y - 24*y^2").unwrap());
    let r = ellipticity_report(&s, &Region::symmetric(1), 5).unwrap();
    let line: Vec<_> = r.samples.iter().filter(|g| g.x_f64 + g.y_f64 == 0.0).collect();
    assert_eq!(line.len(), 5);
    assert!(line.iter().all(|g| g.verdict == Ellipticity::Degenerate));
}

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, 1i64..=2, -3i64..=3).prop_map(|(a, b, c)| GaussianRational::from_parts((a, b), (c, 1)))
}

fn weyl() -> impl Strategy<Value = WeylOp> {
    prop::collection::vec((0u32..=3, 0u32..=3, 0u32..=3, 0u32..=3, coeff()), 1..4).prop_map(WeylOp::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_conjugation_is_parity(d in weyl()) {
        prop_assert_eq!(conjugate(&conjugate(&d)), d.parity());
    }

    #[test]
    fn conjugation_is_linear(a in weyl(), b in weyl(), c in coeff()) {
        prop_assert_eq!(conjugate(&(&a + &b.scale(&c))), &conjugate(&a) + &conjugate(&b).scale(&c));
    }

    #[test]
    fn parity_matches_reflected_application(d in weyl(), u in prop::collection::vec((0u32..=3, 0u32..=3, coeff()), 0..4)) {
        // (P D P)(u) = P(D(P u)) with P u(x, y) = u(−x, −y).
        let u = Poly2::from_terms(u);
        let lhs = d.parity().apply(&u);
        let rhs = d.apply(&u.reflect(true, true)).reflect(true, true);
        prop_assert_eq!(lhs, rhs);
    }
}
