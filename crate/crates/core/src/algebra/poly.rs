//! Bivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;

/// `x^a y^b`, ordered graded-lexicographically with `x > y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.a.cmp(&other.a))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable selector for [`Poly2::partial`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Sparse polynomial in `x, y`. Zero coefficients are never stored, so the
/// zero polynomial is the empty map and equality of term maps is equality of
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::new(1, 0), GaussianRational::one())
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::new(0, 1), GaussianRational::one())
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Builds from `(a, b, c)` triples; repeated keys are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, GaussianRational)>,
    {
        let mut p = Self::zero();
        for (a, b, c) in terms {
            p.add_term(Monomial::new(a, b), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn coeff(&self, m: Monomial) -> GaussianRational {
        self.terms.get(&m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            match var {
                Var::X if m.a > 0 => {
                    out.add_term(Monomial::new(m.a - 1, m.b), c.scale_int(m.a as i64))
                }
                Var::Y if m.b > 0 => {
                    out.add_term(Monomial::new(m.a, m.b - 1), c.scale_int(m.b as i64))
                }
                _ => {}
            }
        }
        out
    }

    /// Substitutes `(x, y) -> (sx·x, sy·y)` for signs `sx, sy ∈ {1, -1}`.
    pub fn reflect(&self, flip_x: bool, flip_y: bool) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let odd = (flip_x && m.a % 2 == 1) ^ (flip_y && m.b % 2 == 1);
            out.add_term(*m, if odd { -c } else { c.clone() });
        }
        out
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval(&self, x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.a {
                t *= x;
            }
            for _ in 0..m.b {
                t *= y;
            }
            acc += &t;
        }
        acc
    }

    /// Double-precision evaluation of the real part (coefficients rounded once).
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64_pair().0 * x.powi(m.a as i32) * y.powi(m.b as i32))
            .sum()
    }

    /// Writes the polynomial with caller-chosen variable names.
    pub fn fmt_with(&self, vars: (&str, &str), f: &mut dyn fmt::Write) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let monomial = render_monomial(*m, vars);
            write_signed_term(f, c, &monomial, first)?;
            first = false;
        }
        Ok(())
    }

    pub fn to_string_with(&self, vars: (&str, &str)) -> String {
        let mut s = String::new();
        self.fmt_with(vars, &mut s).expect("writing to a String");
        s
    }
}

fn render_power(name: &str, k: u32) -> String {
    match k {
        0 => String::new(),
        1 => name.to_string(),
        k => format!("{name}^{k}"),
    }
}

pub(crate) fn render_monomial(m: Monomial, vars: (&str, &str)) -> String {
    let parts: Vec<String> = [render_power(vars.0, m.a), render_power(vars.1, m.b)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    parts.join("*")
}

/// Writes ` + c*mono` / ` - c*mono` (or the leading form when `first`).
/// Real and purely imaginary coefficients have their sign pulled out.
pub(crate) fn write_signed_term(
    f: &mut dyn fmt::Write,
    c: &GaussianRational,
    monomial: &str,
    first: bool,
) -> fmt::Result {
    use num_traits::Signed;
    let negative = if c.is_real() {
        c.re.is_negative()
    } else if c.is_imaginary() {
        c.im.is_negative()
    } else {
        false
    };
    let magnitude = if negative { -c } else { c.clone() };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if monomial.is_empty() {
        write!(f, "{magnitude}")
    } else if magnitude.is_one() {
        write!(f, "{monomial}")
    } else {
        write!(f, "{magnitude}*{monomial}")
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(("x", "y"), f)
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(Monomial::new(m1.a + m2.a, m1.b + m2.b), c1 * c2);
            }
        }
        out
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-GaussianRational::one())
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn difference_of_squares() {
        let x = Poly2::x();
        let y = Poly2::y();
        let lhs = &(&x + &y) * &(&x - &y);
        let rhs = &(&x * &x) - &(&y * &y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn add_zero_is_identity() {
        let p = Poly2::from_terms([(2, 1, q(3)), (0, 0, q(-1))]);
        assert_eq!(&p + &Poly2::zero(), p);
    }

    #[test]
    fn hand_expansion() {
        let p = Poly2::from_terms([(2, 0, q(1)), (1, 1, q(1))]);
        let expected = Poly2::from_terms([(2, 1, q(1)), (1, 2, q(1))]);
        assert_eq!(&p * &Poly2::y(), expected);
    }

    #[test]
    fn partials() {
        let x2y = Poly2::from_terms([(2, 1, q(1))]);
        assert_eq!(x2y.partial(Var::X), Poly2::from_terms([(1, 1, q(2))]));
        assert!(Poly2::constant(q(7)).partial(Var::Y).is_zero());
        let p = Poly2::from_terms([(3, 0, q(1)), (1, 2, q(1))]);
        assert_eq!(
            p.partial(Var::X),
            Poly2::from_terms([(2, 0, q(3)), (0, 2, q(1))])
        );
    }

    #[test]
    fn grlex_display_order() {
        let p = Poly2::from_terms([(0, 0, q(1)), (0, 2, q(1)), (2, 0, q(-2)), (1, 1, q(1))]);
        assert_eq!(p.to_string(), "-2*x^2 + x*y + y^2 + 1");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Poly2::zero().degree(), None);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = Poly2::x();
        assert!((&p - &p).is_empty());
    }
}
