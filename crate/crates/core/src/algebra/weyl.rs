//! Normal-ordered differential operators with polynomial coefficients, i.e.
//! elements of the second Weyl algebra. Every term is stored as
//! `c · x^a y^b ∂x^p ∂y^q` with all multiplications to the left of all
//! derivatives, which makes the representation canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::poly::{render_monomial, write_signed_term, Monomial, Poly2};

/// Exponent data of one normal-ordered term `x^a y^b ∂x^p ∂y^q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WeylKey {
    pub a: u32,
    pub b: u32,
    pub p: u32,
    pub q: u32,
}

impl WeylKey {
    pub fn new(a: u32, b: u32, p: u32, q: u32) -> Self {
        Self { a, b, p, q }
    }

    pub fn order(&self) -> u32 {
        self.p + self.q
    }

    pub fn coeff_monomial(&self) -> Monomial {
        Monomial::new(self.a, self.b)
    }

    pub fn deriv_monomial(&self) -> Monomial {
        Monomial::new(self.p, self.q)
    }
}

impl Ord for WeylKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deriv_monomial()
            .cmp(&other.deriv_monomial())
            .then(self.coeff_monomial().cmp(&other.coeff_monomial()))
    }
}

impl PartialOrd for WeylKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WeylOp {
    terms: BTreeMap<WeylKey, GaussianRational>,
}

/// `n (n-1) ... (n-k+1)`
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn int_coeff(n: BigInt) -> GaussianRational {
    GaussianRational::from(BigRational::from_integer(n))
}

impl WeylOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(WeylKey::new(0, 0, 0, 0), GaussianRational::one())
    }

    pub fn term(key: WeylKey, c: GaussianRational) -> Self {
        let mut op = Self::zero();
        op.add_term(key, c);
        op
    }

    pub fn dx() -> Self {
        Self::term(WeylKey::new(0, 0, 1, 0), GaussianRational::one())
    }

    pub fn dy() -> Self {
        Self::term(WeylKey::new(0, 0, 0, 1), GaussianRational::one())
    }

    pub fn x() -> Self {
        Self::multiplication(&Poly2::x())
    }

    pub fn y() -> Self {
        Self::multiplication(&Poly2::y())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::term(WeylKey::new(0, 0, 0, 0), c)
    }

    /// The operator `u ↦ f·u`.
    pub fn multiplication(f: &Poly2) -> Self {
        Self::with_derivative(f, 0, 0)
    }

    /// `f · ∂x^p ∂y^q`.
    pub fn with_derivative(f: &Poly2, p: u32, q: u32) -> Self {
        let mut op = Self::zero();
        for (m, c) in f.terms() {
            op.add_term(WeylKey::new(m.a, m.b, p, q), c.clone());
        }
        op
    }

    /// `P·∂x + Q·∂y`, the derivation attached to the planar field `(P, Q)`.
    pub fn from_field(p: &Poly2, q: &Poly2) -> Self {
        &Self::with_derivative(p, 1, 0) + &Self::with_derivative(q, 0, 1)
    }

    /// Builds from `(a, b, p, q, c)` tuples; repeated keys are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u32, u32, GaussianRational)>,
    {
        let mut op = Self::zero();
        for (a, b, p, q, c) in terms {
            op.add_term(WeylKey::new(a, b, p, q), c);
        }
        op
    }

    pub fn add_term(&mut self, key: WeylKey, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order `max(p+q)`; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::order).max()
    }

    /// Highest total degree `max(a+b)` among the coefficients.
    pub fn coefficient_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.a + k.b).max()
    }

    /// Largest degree shift `max(a+b-p-q)` over terms.
    pub fn degree_shift(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|k| (k.a + k.b) as i64 - k.order() as i64)
            .max()
    }

    /// The polynomial multiplying `∂x^p ∂y^q`.
    pub fn coefficient_of(&self, p: u32, q: u32) -> Poly2 {
        let mut out = Poly2::zero();
        for (k, c) in &self.terms {
            if k.p == p && k.q == q {
                out.add_term(k.coeff_monomial(), c.clone());
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Conjugation by the parity map `(x, y) ↦ (-x, -y)`: each term picks up
    /// `(-1)^(a+b+p+q)`.
    pub fn parity(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let odd = (k.a + k.b + k.p + k.q) % 2 == 1;
            out.add_term(*k, if odd { -c } else { c.clone() });
        }
        out
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, u: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (k, c) in &self.terms {
            for (m, cu) in u.terms() {
                if m.a < k.p || m.b < k.q {
                    continue;
                }
                let factor = falling(m.a, k.p) * falling(m.b, k.q);
                out.add_term(
                    Monomial::new(m.a - k.p + k.a, m.b - k.q + k.b),
                    &(c * cu) * &int_coeff(factor),
                );
            }
        }
        out
    }

    /// Normal-ordered product `self ∘ rhs` using the Leibniz rule
    /// `∂^p x^c = Σ_k C(p,k) c!/(c-k)! x^(c-k) ∂^(p-k)` in each variable.
    pub fn compose(&self, rhs: &WeylOp) -> WeylOp {
        let mut out = WeylOp::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let base = c1 * c2;
                for kx in 0..=k1.p.min(k2.a) {
                    let fx = binomial(k1.p, kx) * falling(k2.a, kx);
                    for ky in 0..=k1.q.min(k2.b) {
                        let fy = binomial(k1.q, ky) * falling(k2.b, ky);
                        let key = WeylKey::new(
                            k1.a + k2.a - kx,
                            k1.b + k2.b - ky,
                            k1.p - kx + k2.p,
                            k1.q - ky + k2.q,
                        );
                        out.add_term(key, &base * &int_coeff(&fx * fy));
                    }
                }
            }
        }
        out
    }

    /// `[self, rhs] = self∘rhs - rhs∘self`.
    pub fn commutator(&self, rhs: &WeylOp) -> WeylOp {
        &self.compose(rhs) - &rhs.compose(self)
    }

    pub fn pow(&self, k: u32) -> WeylOp {
        (0..k).fold(WeylOp::identity(), |acc, _| acc.compose(self))
    }
}

fn render_key(k: &WeylKey) -> String {
    let coeff = render_monomial(k.coeff_monomial(), ("x", "y"));
    let deriv = render_monomial(k.deriv_monomial(), ("dx", "dy"));
    match (coeff.is_empty(), deriv.is_empty()) {
        (true, _) => deriv,
        (false, true) => coeff,
        (false, false) => format!("{coeff}*{deriv}"),
    }
}

impl fmt::Display for WeylOp {
    /// Highest-order terms first, e.g. `x*dx^2 + 2*dx`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            write_signed_term(f, c, &render_key(k), first)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({self})")
    }
}

impl<'a> Add<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

/// `*` on operators is composition.
impl<'a> Mul<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.compose(rhs)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale(&-GaussianRational::one())
    }
}
