//! Exact value of the ratio between `tr(E dE dE)` and the curvature form.
//!
//! At a point where the Gauss map takes the value `N` with chart derivatives
//! `N_u, N_v` (both tangent to the unit sphere at `N`), `tr(E (E_u E_v −
//! E_v E_u))` is a multiple of `det[N, N_u, N_v]`. That multiple is computed
//! here in exact Gaussian-rational arithmetic at rational points of the
//! sphere. Combined with `∬ K = 3 ∬ f dg dh` it fixes
//! `λ = τ₂(E, E, E) / ∬ f dg dh`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::GaussianRational;

type Q = BigRational;
type M = [[GaussianRational; 2]; 2];

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn gr(x: &Q) -> GaussianRational {
    GaussianRational::from(x.clone())
}

/// `½ [[c + h, f + ig], [f − ig, c − h]]`; `c = 1` for `E`, `c = 0` for a
/// derivative.
fn bott(v: &[Q; 3], c: i64) -> M {
    let half = GaussianRational::from_ratio(1, 2);
    let i = GaussianRational::i();
    let [f, g, h] = v.each_ref().map(gr);
    let c = GaussianRational::from_int(c);
    [
        [&half * &(&c + &h), &half * &(&f + &(&i * &g))],
        [&half * &(&f - &(&i * &g)), &half * &(&c - &h)],
    ]
}

fn mul(a: &M, b: &M) -> M {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn det3(a: &[Q; 3], b: &[Q; 3], c: &[Q; 3]) -> Q {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// `tr(E (E_u E_v − E_v E_u)) / det[N, N_u, N_v]`, or `None` when the
/// determinant vanishes.
pub fn symbolic_density_ratio(n: &[Q; 3], nu: &[Q; 3], nv: &[Q; 3]) -> Option<GaussianRational> {
    let d = det3(n, nu, nv);
    if d.is_zero() {
        return None;
    }
    let (e, eu, ev) = (bott(n, 1), bott(nu, 0), bott(nv, 0));
    let uv = mul(&eu, &ev);
    let vu = mul(&ev, &eu);
    let comm = [
        [&uv[0][0] - &vu[0][0], &uv[0][1] - &vu[0][1]],
        [&uv[1][0] - &vu[1][0], &uv[1][1] - &vu[1][1]],
    ];
    let p = mul(&e, &comm);
    let tr = &p[0][0] + &p[1][1];
    Some(&tr / &gr(&d))
}

/// Inverse stereographic projection `(s, t) ↦ N` with its exact partials.
fn stereographic(s: &Q, t: &Q) -> ([Q; 3], [Q; 3], [Q; 3]) {
    let one = q(1);
    let two = q(2);
    let den = &one + s * s + t * t;
    let num = [&two * s, &two * t, s * s + t * t - &one];
    let num_s = [two.clone(), q(0), &two * s];
    let num_t = [q(0), two.clone(), &two * t];
    let (den_s, den_t) = (&two * s, &two * t);
    let den2 = &den * &den;
    let n = num.clone().map(|x| x / &den);
    let part = |dn: &[Q; 3], dd: &Q| -> [Q; 3] {
        [0, 1, 2].map(|k| (&dn[k] * &den - &num[k] * dd) / &den2)
    };
    (n, part(&num_s, &den_s), part(&num_t, &den_t))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicLambda {
    /// The common pointwise ratio, printed exactly.
    pub density_ratio: String,
    /// `3 ×` the ratio.
    pub lambda: String,
    pub lambda_f64: [f64; 2],
    pub points_checked: usize,
    /// Whether every sampled point gave the same ratio.
    pub consistent: bool,
}

/// Evaluates the ratio at a grid of rational sphere points with rational
/// tangent frames (including skewed frames) and returns `λ = 3 × ratio`.
pub fn symbolic_lambda() -> SymbolicLambda {
    let mut ratios: Vec<GaussianRational> = Vec::new();
    let vals = [(-3, 2), (-1, 3), (0, 1), (1, 2), (2, 1), (5, 4)];
    for (a, b) in vals {
        for (c, d) in vals {
            let s = Q::new(a.into(), b.into());
            let t = Q::new(c.into(), d.into());
            let (n, ns, nt) = stereographic(&s, &t);
            // A sheared frame: (N_s + 2 N_t, -N_s / 3 + N_t).
            let nu: [Q; 3] = [0, 1, 2].map(|k| &ns[k] + &nt[k] * q(2));
            let nv: [Q; 3] = [0, 1, 2].map(|k| &nt[k] - &ns[k] / q(3));
            for (x, y) in [(&ns, &nt), (&nu, &nv)] {
                if let Some(r) = symbolic_density_ratio(&n, x, y) {
                    ratios.push(r);
                }
            }
        }
    }
    let first = ratios[0].clone();
    let consistent = ratios.iter().all(|r| *r == first);
    let lambda = &first * &GaussianRational::from_int(3);
    let (re, im) = lambda.to_f64_pair();
    SymbolicLambda {
        density_ratio: first.to_string(),
        lambda: lambda.to_string(),
        lambda_f64: [re, im],
        points_checked: ratios.len(),
        consistent,
    }
}
