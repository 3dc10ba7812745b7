//! Fourier conjugation of Weyl-algebra operators, principal symbols and
//! pointwise ellipticity of second-order symbols.
//!
//! Convention: `F u(ξ) = ∫ e^{-i⟨x,ξ⟩} u(x) dx`. Then `F⁻¹ ∘ D ∘ F` is obtained
//! from `D` by the generator substitution
//!
//! | generator | image      |
//! |-----------|------------|
//! | `x`       | `-i ∂x`    |
//! | `y`       | `-i ∂y`    |
//! | `∂x`      | `-i x`     |
//! | `∂y`      | `-i y`     |
//!
//! Each term `c x^a y^b ∂x^p ∂y^q` becomes
//! `c (-i)^(a+b+p+q) ∂x^a ∂y^b ∘ x^p y^q`, normal-ordered by composition. The
//! unit factors are kept as they are; they do not change orders, coranks or
//! ellipticity verdicts.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{GaussianRational, Monomial, Poly2, WeylKey, WeylOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("the zero operator has no principal symbol")]
    ZeroOperator,
    #[error("symbol must be homogeneous of degree 2 in (xi, eta), found degree {found}")]
    WrongOrder { found: u32 },
    #[error("symbol is not homogeneous in (xi, eta)")]
    NotHomogeneous,
    #[error("operator exceeds the order-3 guard (order {order}, coefficient degree {degree})")]
    TooLarge { order: u32, degree: u32 },
    #[error("grid resolution must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("region bounds must satisfy lo < hi")]
    EmptyRegion,
}

/// `(-i)^k`
fn minus_i_pow(k: u32) -> GaussianRational {
    GaussianRational::i_pow(3 * (k % 4))
}

/// `F⁻¹ D F`.
pub fn conjugate(op: &WeylOp) -> WeylOp {
    let mut out = WeylOp::zero();
    for (k, c) in op.terms() {
        let derivs = WeylOp::term(WeylKey::new(0, 0, k.a, k.b), GaussianRational::one());
        let mults = WeylOp::term(WeylKey::new(k.p, k.q, 0, 0), GaussianRational::one());
        let unit = minus_i_pow(k.a + k.b + k.p + k.q);
        out = &out + &derivs.compose(&mults).scale(&(c * &unit));
    }
    out
}

/// Largest operator size accepted by [`conjugation_is_homomorphism_check`].
pub const HOMOMORPHISM_GUARD: u32 = 3;

/// `conjugate(A∘B) == conjugate(A)∘conjugate(B)`, exactly.
pub fn conjugation_is_homomorphism_check(a: &WeylOp, b: &WeylOp) -> Result<bool, SpectralError> {
    for op in [a, b] {
        let order = op.order().unwrap_or(0);
        let degree = op.coefficient_degree().unwrap_or(0);
        if order > HOMOMORPHISM_GUARD || degree > HOMOMORPHISM_GUARD {
            return Err(SpectralError::TooLarge { order, degree });
        }
    }
    Ok(conjugate(&a.compose(b)) == conjugate(a).compose(&conjugate(b)))
}

/// Polynomial in `(x, y, ξ, η)`, stored as `(ξ,η)`-monomial to `(x,y)`
/// coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymbolPoly {
    terms: BTreeMap<Monomial, Poly2>,
}

impl SymbolPoly {
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Poly2)>,
    {
        let mut s = Self::default();
        for (p, q, c) in terms {
            s.add(Monomial::new(p, q), &c);
        }
        s
    }

    fn add(&mut self, m: Monomial, c: &Poly2) {
        let entry = self.terms.entry(m).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Coefficient of `ξ^p η^q`.
    pub fn coefficient(&self, p: u32, q: u32) -> Poly2 {
        self.terms.get(&Monomial::new(p, q)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common `(ξ,η)` degree, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::default();
        for (m, p) in &self.terms {
            out.add(*m, &p.scale(c));
        }
        out
    }

    /// The `k ∈ {0,1,2,3}` with `i^(-k)·s` real, if one exists.
    pub fn unit_phase(&self) -> Option<u32> {
        (0..4).find(|&k| {
            let back = GaussianRational::i_pow(4 - k);
            self.terms.values().all(|p| p.scale(&back).is_real())
        })
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let covar = crate::algebra::poly::render_monomial(*m, ("xi", "eta"));
            if c.len() == 1 {
                let (cm, cc) = c.terms().next().expect("one term");
                let mono = crate::algebra::poly::render_monomial(*cm, ("x", "y"));
                let joined = match (mono.is_empty(), covar.is_empty()) {
                    (true, _) => covar.clone(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{covar}"),
                };
                crate::algebra::poly::write_signed_term(f, cc, &joined, first)?;
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                if covar.is_empty() {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "({c})*{covar}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolPoly({self})")
    }
}

/// Top-order part of `D` with `∂x^p ∂y^q ↦ ξ^p η^q`.
pub fn principal_symbol(op: &WeylOp) -> Result<SymbolPoly, SpectralError> {
    let order = op.order().ok_or(SpectralError::ZeroOperator)?;
    let mut s = SymbolPoly::default();
    for (k, c) in op.terms() {
        if k.order() == order {
            s.add(k.deriv_monomial(), &Poly2::monomial(k.coeff_monomial(), c.clone()));
        }
    }
    Ok(s)
}

/// `(P, Q)` whose quadratic parts are `P₂ = ax²+bxy+cy²`, `Q₂ = dx²+exy+fy²`.
pub fn quadratic_field(coeffs: [i64; 6]) -> (Poly2, Poly2) {
    let [a, b, c, d, e, f] = coeffs.map(GaussianRational::from_int);
    let p = Poly2::from_terms([(2, 0, a), (1, 1, b), (0, 2, c)]);
    let q = Poly2::from_terms([(2, 0, d), (1, 1, e), (0, 2, f)]);
    (p, q)
}

/// Expected principal symbol of the conjugated quadratic field:
/// `i[(ax+dy)ξ² + (bx+ey)ξη + (cx+fy)η²]`.
pub fn expected_quadratic_symbol(coeffs: [i64; 6]) -> SymbolPoly {
    let [a, b, c, d, e, f] = coeffs.map(GaussianRational::from_int);
    let lin = |u: GaussianRational, v: GaussianRational| Poly2::from_terms([(1, 0, u), (0, 1, v)]);
    SymbolPoly::from_terms([(2, 0, lin(a, d)), (1, 1, lin(b, e)), (0, 2, lin(c, f))])
        .scale(&GaussianRational::i())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ellipticity {
    Elliptic,
    Degenerate,
    Indefinite,
}

impl fmt::Display for Ellipticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ellipticity::Elliptic => "elliptic",
            Ellipticity::Degenerate => "degenerate",
            Ellipticity::Indefinite => "indefinite",
        })
    }
}

/// Closed rectangle with rational corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub x: (BigRational, BigRational),
    pub y: (BigRational, BigRational),
}

impl Region {
    pub fn new(x: (BigRational, BigRational), y: (BigRational, BigRational)) -> Result<Self, SpectralError> {
        if x.0 >= x.1 || y.0 >= y.1 {
            return Err(SpectralError::EmptyRegion);
        }
        Ok(Self { x, y })
    }

    pub fn symmetric(half_width: i64) -> Self {
        let h = BigRational::from_integer(half_width.into());
        Self { x: (-h.clone(), h.clone()), y: (-h.clone(), h) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSample {
    pub i: usize,
    pub j: usize,
    pub x: String,
    pub y: String,
    pub x_f64: f64,
    pub y_f64: f64,
    /// Discriminant at the point (after removing the global unit when the
    /// symbol has one).
    pub discriminant: String,
    pub discriminant_f64: f64,
    pub verdict: Ellipticity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignChange {
    pub from: (String, String),
    pub to: (String, String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticityReport {
    pub symbol: String,
    /// `k` such that the symbol is `i^k` times a real symbol.
    pub unit_phase: Option<u32>,
    /// `B² - 4AC` of the real symbol `i^(-k)·s` (or of `s` itself when no unit
    /// phase exists).
    pub discriminant: String,
    pub grid: usize,
    pub samples: Vec<GridSample>,
    pub degenerate_points: Vec<(String, String)>,
    pub sign_changes: Vec<SignChange>,
    pub elliptic_count: usize,
    pub degenerate_count: usize,
    pub indefinite_count: usize,
    pub note: &'static str,
}

/// Second-order coefficients `(A, B, C)` of `Aξ² + Bξη + Cη²`.
fn quadratic_parts(s: &SymbolPoly) -> Result<[Poly2; 3], SpectralError> {
    match s.homogeneous_degree() {
        Some(2) => Ok([s.coefficient(2, 0), s.coefficient(1, 1), s.coefficient(0, 2)]),
        Some(found) => Err(SpectralError::WrongOrder { found }),
        None if s.is_zero() => Err(SpectralError::WrongOrder { found: 0 }),
        None => Err(SpectralError::NotHomogeneous),
    }
}

/// Symbolic `B² - 4AC`, with the global unit factor removed when present.
pub fn discriminant(s: &SymbolPoly) -> Result<(Option<u32>, Poly2), SpectralError> {
    let phase = s.unit_phase();
    let real = match phase {
        Some(k) => s.scale(&GaussianRational::i_pow(4 - k)),
        None => s.clone(),
    };
    let [a, b, c] = quadratic_parts(&real)?;
    let four = Poly2::constant(GaussianRational::from_int(4));
    Ok((phase, &(&b * &b) - &(&(&four * &a) * &c)))
}

/// Exact classification of `Aξ² + Bξη + Cη²` with numeric coefficients.
pub fn classify_form(a: &GaussianRational, b: &GaussianRational, c: &GaussianRational) -> Ellipticity {
    let Some(omega) = [a, b, c].into_iter().find(|v| !v.is_zero()) else {
        return Ellipticity::Degenerate;
    };
    let (ra, rb, rc) = (a / omega, b / omega, c / omega);
    if ra.is_real() && rb.is_real() && rc.is_real() {
        let four = BigRational::from_integer(4.into());
        let disc = &rb.re * &rb.re - four * &ra.re * &rc.re;
        return if disc.is_negative() {
            Ellipticity::Elliptic
        } else if disc.is_zero() {
            Ellipticity::Degenerate
        } else {
            Ellipticity::Indefinite
        };
    }
    if has_real_null_direction(a, b, c) {
        Ellipticity::Degenerate
    } else {
        Ellipticity::Elliptic
    }
}

/// Whether a genuinely complex form vanishes on some real `(ξ,η) ≠ 0`.
fn has_real_null_direction(a: &GaussianRational, b: &GaussianRational, c: &GaussianRational) -> bool {
    if a.is_zero() {
        // ξ = (1, 0) is null.
        return true;
    }
    // Real roots t of A t² + B t + C, i.e. common real roots of the real and
    // imaginary parts.
    let re = vec![c.re.clone(), b.re.clone(), a.re.clone()];
    let im = vec![c.im.clone(), b.im.clone(), a.im.clone()];
    let g = poly_gcd(re, im);
    match g.len() {
        0 | 1 => false,
        2 => true,
        _ => {
            let (c0, c1, c2) = (&g[0], &g[1], &g[2]);
            let four = BigRational::from_integer(4.into());
            c1 * c1 - four * c2 * c0 >= BigRational::zero()
        }
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Euclidean gcd of univariate rational polynomials (ascending coefficients).
fn poly_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        let mut r = a.clone();
        let lead = b.last().expect("nonempty").clone();
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = r.last().expect("nonempty").clone() / &lead;
            for (i, bc) in b.iter().enumerate() {
                r[i + shift] -= &factor * bc;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        a = b;
        b = r;
    }
    a
}

fn fmt_q(q: &BigRational) -> String {
    GaussianRational::from(q.clone()).to_string()
}

/// Pointwise ellipticity on an `n × n` grid over `region`.
pub fn ellipticity_report(
    s: &SymbolPoly,
    region: &Region,
    grid: usize,
) -> Result<EllipticityReport, SpectralError> {
    if grid < 2 {
        return Err(SpectralError::GridTooSmall(grid));
    }
    let (phase, disc) = discriminant(s)?;
    let [a, b, c] = quadratic_parts(s)?;
    let steps = BigRational::from_integer(((grid - 1) as i64).into());
    let coord = |lo: &BigRational, hi: &BigRational, k: usize| {
        lo + (hi - lo) * BigRational::from_integer((k as i64).into()) / &steps
    };
    let mut samples = Vec::with_capacity(grid * grid);
    let mut disc_values = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let x = coord(&region.x.0, &region.x.1, i);
        for j in 0..grid {
            let y = coord(&region.y.0, &region.y.1, j);
            let (gx, gy) = (GaussianRational::from(x.clone()), GaussianRational::from(y.clone()));
            let verdict = classify_form(&a.eval(&gx, &gy), &b.eval(&gx, &gy), &c.eval(&gx, &gy));
            let dv = disc.eval(&gx, &gy);
            samples.push(GridSample {
                i,
                j,
                x: fmt_q(&x),
                y: fmt_q(&y),
                x_f64: x.to_f64().unwrap_or(f64::NAN),
                y_f64: y.to_f64().unwrap_or(f64::NAN),
                discriminant: dv.to_string(),
                discriminant_f64: dv.to_f64_pair().0,
                verdict,
            });
            disc_values.push(dv);
        }
    }
    let sign = |v: &GaussianRational| -> Option<i8> {
        v.is_real().then(|| if v.re.is_positive() { 1 } else if v.re.is_negative() { -1 } else { 0 })
    };
    let mut sign_changes = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let here = i * grid + j;
            for there in [(i + 1 < grid).then(|| here + grid), (j + 1 < grid).then(|| here + 1)]
                .into_iter()
                .flatten()
            {
                if let (Some(s1), Some(s2)) = (sign(&disc_values[here]), sign(&disc_values[there])) {
                    if s1 * s2 < 0 {
                        sign_changes.push(SignChange {
                            from: (samples[here].x.clone(), samples[here].y.clone()),
                            to: (samples[there].x.clone(), samples[there].y.clone()),
                        });
                    }
                }
            }
        }
    }
    let degenerate_points = samples
        .iter()
        .filter(|s| s.verdict == Ellipticity::Degenerate)
        .map(|s| (s.x.clone(), s.y.clone()))
        .collect();
    let count = |v: Ellipticity| samples.iter().filter(|s| s.verdict == v).count();
    Ok(EllipticityReport {
        symbol: s.to_string(),
        unit_phase: phase,
        discriminant: disc.to_string(),
        grid,
        elliptic_count: count(Ellipticity::Elliptic),
        degenerate_count: count(Ellipticity::Degenerate),
        indefinite_count: count(Ellipticity::Indefinite),
        samples,
        degenerate_points,
        sign_changes,
        note: "pointwise verdicts only; symbols with coefficients linear in (x,y) always degenerate at the origin",
    })
}

/// Verdict at a single rational point.
pub fn classify_at(s: &SymbolPoly, x: &GaussianRational, y: &GaussianRational) -> Result<Ellipticity, SpectralError> {
    let [a, b, c] = quadratic_parts(s)?;
    Ok(classify_form(&a.eval(x, y), &b.eval(x, y), &c.eval(x, y)))
}
