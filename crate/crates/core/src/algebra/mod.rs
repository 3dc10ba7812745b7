//! Exact arithmetic: Gaussian rationals, bivariate polynomials and the
//! second Weyl algebra of polynomial-coefficient differential operators.

pub mod gaussian;
pub mod parse;
pub mod poly;
pub mod weyl;

pub use gaussian::{GaussianInteger, GaussianRational};
pub use parse::{parse_poly, parse_weyl, ParseError};
pub use poly::{Monomial, Poly2, Var};
pub use weyl::{WeylKey, WeylOp};
