//! Exact coranks for operators that act on monomials by a fixed exponent
//! shift.
//!
//! If every term `x^a y^b ∂x^p ∂y^q` of `D` has the same `(a-p, b-q) = s`,
//! then `D(x^n y^m) = λ(n,m) x^(n+sx) y^(m+sy)` with
//! `λ(n,m) = Σ c · n(n-1)…(n-p+1) · m(m-1)…(m-q+1)`. Distinct monomials map to
//! distinct monomials, so the range is spanned by the monomials hit with
//! `λ ≠ 0` and the corank on the whole polynomial ring can be counted. The
//! diagonal case `s = (0,0)` is a monomial eigenbasis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{GaussianRational, Monomial, Poly2, WeylOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Corank {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Corank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corank::Finite(k) => write!(f, "corank = {k}"),
            Corank::Infinite => write!(f, "diverging (∞)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCorank {
    pub value: Corank,
    /// Exponent shift `(a-p, b-q)` shared by all terms.
    pub shift: (i64, i64),
    /// `λ(n,m)` printed with `n, m` as variables.
    pub eigenvalue: String,
    pub reason: String,
}

/// Largest root candidate scanned for univariate eigenvalue polynomials.
const MAX_ROOT_SCAN: i64 = 1_000_000;

/// `t (t-1) ... (t-k+1)` as a polynomial in the chosen variable.
fn falling_poly(k: u32, var: &Poly2) -> Poly2 {
    (0..k).fold(Poly2::one(), |acc, j| {
        &acc * &(var - &Poly2::constant(GaussianRational::from_int(j as i64)))
    })
}

/// Returns the shared shift and `λ(n,m)` when `op` has shift structure.
pub fn shift_structure(op: &WeylOp) -> Option<((i64, i64), Poly2)> {
    let mut shift = None;
    let mut lambda = Poly2::zero();
    let n = Poly2::x();
    let m = Poly2::y();
    for (k, c) in op.terms() {
        let s = (k.a as i64 - k.p as i64, k.b as i64 - k.q as i64);
        match shift {
            None => shift = Some(s),
            Some(prev) if prev != s => return None,
            _ => {}
        }
        let term = &falling_poly(k.p, &n) * &falling_poly(k.q, &m);
        lambda = &lambda + &term.scale(c);
    }
    Some((shift.unwrap_or((0, 0)), lambda))
}

/// Exact corank of `op` on `C[x,y]`, when it can be decided.
pub fn exact_corank(op: &WeylOp) -> Option<ExactCorank> {
    let (shift, lambda) = shift_structure(op)?;
    let eigenvalue = lambda.to_string_with(("n", "m"));
    let done = |value: Corank, reason: String| {
        Some(ExactCorank { value, shift, eigenvalue: eigenvalue.clone(), reason })
    };
    if shift.0 > 0 || shift.1 > 0 {
        return done(
            Corank::Infinite,
            format!("every term raises exponents by {shift:?}; infinitely many monomials have no preimage"),
        );
    }
    let n0 = BigInt::from(-shift.0);
    let m0 = BigInt::from(-shift.1);
    if lambda.is_zero() {
        return done(Corank::Infinite, "operator is zero".into());
    }
    let value = match lambda.degree() {
        Some(0) => Corank::Finite(0),
        Some(1) => affine_zero_count(&lambda, &n0, &m0),
        _ => univariate_zero_count(&lambda, &n0, &m0)?,
    };
    let how = if shift == (0, 0) { "monomial eigenbasis" } else { "monomial shift" };
    done(value, format!("{how}: counted lattice zeros of the eigenvalue"))
}

fn real_and_imag(c: &GaussianRational) -> [BigRational; 2] {
    [c.re.clone(), c.im.clone()]
}

/// Zeros of `λ = α + β n + γ m` on `n ≥ n0, m ≥ m0`.
fn affine_zero_count(lambda: &Poly2, n0: &BigInt, m0: &BigInt) -> Corank {
    let alpha = real_and_imag(&lambda.coeff(Monomial::new(0, 0)));
    let beta = real_and_imag(&lambda.coeff(Monomial::new(1, 0)));
    let gamma = real_and_imag(&lambda.coeff(Monomial::new(0, 1)));
    // Two real equations A n + B m = C, scaled to integers.
    let mut eqs = Vec::new();
    for k in 0..2 {
        let (b, g, a) = (&beta[k], &gamma[k], &alpha[k]);
        if b.is_zero() && g.is_zero() {
            if !a.is_zero() {
                return Corank::Finite(0);
            }
            continue;
        }
        let l = b.denom().lcm(g.denom()).lcm(a.denom());
        let scale = BigRational::from_integer(l);
        let ai = (b * &scale).to_integer();
        let bi = (g * &scale).to_integer();
        let ci = (-(a * &scale)).to_integer();
        eqs.push((ai, bi, ci));
    }
    match eqs.len() {
        0 => Corank::Infinite,
        1 => line_zero_count(&eqs[0], n0, m0),
        _ => {
            let (a1, b1, c1) = &eqs[0];
            let (a2, b2, c2) = &eqs[1];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                // Parallel: consistent iff the augmented rank is 1.
                if (a1 * c2 - a2 * c1).is_zero() && (b1 * c2 - b2 * c1).is_zero() {
                    line_zero_count(&eqs[0], n0, m0)
                } else {
                    Corank::Finite(0)
                }
            } else {
                let n = BigRational::new(c1 * b2 - c2 * b1, det.clone());
                let m = BigRational::new(a1 * c2 - a2 * c1, det);
                let ok = n.is_integer()
                    && m.is_integer()
                    && &n.to_integer() >= n0
                    && &m.to_integer() >= m0;
                Corank::Finite(ok as u64)
            }
        }
    }
}

/// Lattice points of `A n + B m = C` with `n ≥ n0, m ≥ m0`, `(A,B) ≠ 0`.
fn line_zero_count((a, b, c): &(BigInt, BigInt, BigInt), n0: &BigInt, m0: &BigInt) -> Corank {
    if b.is_zero() {
        let (q, r) = c.div_rem(a);
        return if r.is_zero() && &q >= n0 { Corank::Infinite } else { Corank::Finite(0) };
    }
    if a.is_zero() {
        let (q, r) = c.div_rem(b);
        return if r.is_zero() && &q >= m0 { Corank::Infinite } else { Corank::Finite(0) };
    }
    if a.is_positive() != b.is_positive() {
        let g = a.gcd(b);
        return if c.is_multiple_of(&g) { Corank::Infinite } else { Corank::Finite(0) };
    }
    // Same signs: normalize to A, B > 0; finitely many points with n ≤ C/A.
    let (a, b, c) = if a.is_negative() { (-a, -b, -c) } else { (a.clone(), b.clone(), c.clone()) };
    let mut count = 0u64;
    let mut n = n0.clone();
    while &a * &n <= c {
        let rest = &c - &a * &n;
        let (m, r) = rest.div_rem(&b);
        if r.is_zero() && &m >= m0 {
            count += 1;
        }
        n += 1;
    }
    Corank::Finite(count)
}

/// Higher-degree `λ` depending on one exponent only: each integer root in
/// range contributes a whole line of monomials.
fn univariate_zero_count(lambda: &Poly2, n0: &BigInt, m0: &BigInt) -> Option<Corank> {
    let only_n = lambda.terms().all(|(mono, _)| mono.b == 0);
    let only_m = lambda.terms().all(|(mono, _)| mono.a == 0);
    if !only_n && !only_m {
        return None;
    }
    let (lo, coeffs): (&BigInt, Vec<(u32, GaussianRational)>) = if only_n {
        (n0, lambda.terms().map(|(mono, c)| (mono.a, c.clone())).collect())
    } else {
        (m0, lambda.terms().map(|(mono, c)| (mono.b, c.clone())).collect())
    };
    let (top_deg, top) = coeffs.iter().max_by_key(|(d, _)| *d)?.clone();
    let top_norm = top.norm_sqr();
    // Cauchy bound on the modulus of any root.
    let mut bound = BigRational::one();
    for (d, c) in &coeffs {
        if *d < top_deg {
            let ratio = c.norm_sqr() / &top_norm;
            // sqrt(ratio) ≤ ratio + 1
            let r = ratio + BigRational::one();
            if r > bound {
                bound = r.clone();
            }
        }
    }
    let bound = (bound + BigRational::one()).ceil().to_integer().to_i64()?;
    if bound > MAX_ROOT_SCAN {
        return None;
    }
    let start = lo.to_i64()?;
    let eval = |t: i64| {
        let t = GaussianRational::from_int(t);
        coeffs.iter().fold(GaussianRational::zero(), |acc, (d, c)| {
            let mut v = c.clone();
            for _ in 0..*d {
                v *= &t;
            }
            acc + v
        })
    };
    let has_root = (start..=bound).any(|t| eval(t).is_zero());
    Some(if has_root { Corank::Infinite } else { Corank::Finite(0) })
}
