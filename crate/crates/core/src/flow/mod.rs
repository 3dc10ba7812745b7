//! Planar polynomial flows `x' = P(x, y), y' = Q(x, y)`: adaptive
//! integration, first-return maps on rays from the origin, and limit-cycle
//! detection.
//!
//! Dynamics run in double precision. The exact polynomials are kept alongside
//! so the same field can be handed to [`crate::corank`].

mod bounds;
mod cycles;
mod integrator;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{parse_poly, GaussianRational, ParseError, Poly2, Var, WeylOp};

pub use bounds::{bound_compare, BoundReport, CorankEvidence};
pub use cycles::{
    find_limit_cycles, return_map, CycleScan, LimitCycleRecord, ReturnOptions, ReturnPoint,
    ScanOptions, ScanSample, SampleStatus, Section, Stability, TimeDirection, SECTION_ROTATION,
};
pub use integrator::{check_tolerance, dopri_step, integrate_orbit, Trajectory, BLOW_UP_NORM, TOL_RANGE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("orbit diverged: |state| = {norm:e} at t = {t}")]
    Divergence { t: f64, norm: f64 },
    #[error("no return to the section within t = {t_max}")]
    NoReturn { t_max: f64 },
    #[error("flow is tangent to the section at r = {r}")]
    NotTransversal { r: f64 },
    #[error("no section ray through the origin is transversal on the scan range")]
    NoTransversalSection,
    #[error("tolerance {0:e} outside [1e-12, 1e-4]")]
    InvalidTolerance(f64),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step limit exceeded at t = {t}")]
    StepLimit { t: f64 },
    #[error("field components must have real coefficients")]
    NonReal,
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("unknown built-in field `{0}`")]
    UnknownField(String),
    #[error("cannot parse field component: {0}")]
    Parse(#[from] ParseError),
}

/// `Σ c x^a y^b` with coefficients rounded once.
#[derive(Clone, Debug, PartialEq)]
struct Compiled {
    terms: Vec<(i32, i32, f64)>,
}

impl Compiled {
    fn new(p: &Poly2) -> Self {
        Self { terms: p.terms().map(|(m, c)| (m.a as i32, m.b as i32, c.to_f64_pair().0)).collect() }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c * x.powi(a) * y.powi(b)).sum()
    }
}

/// A real polynomial vector field with its Jacobian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowField {
    pub label: String,
    pub p: String,
    pub q: String,
    #[serde(skip)]
    exact: [Poly2; 2],
    #[serde(skip)]
    compiled: [Compiled; 2],
    #[serde(skip)]
    jacobian: [Compiled; 4],
}

impl FlowField {
    pub fn new(label: impl Into<String>, p: Poly2, q: Poly2) -> Result<Self, FlowError> {
        if !p.is_real() || !q.is_real() {
            return Err(FlowError::NonReal);
        }
        let jacobian = [p.partial(Var::X), p.partial(Var::Y), q.partial(Var::X), q.partial(Var::Y)]
            .map(|j| Compiled::new(&j));
        Ok(Self {
            label: label.into(),
            p: p.to_string(),
            q: q.to_string(),
            compiled: [Compiled::new(&p), Compiled::new(&q)],
            exact: [p, q],
            jacobian,
        })
    }

    pub fn parse(label: impl Into<String>, p: &str, q: &str) -> Result<Self, FlowError> {
        Self::new(label, parse_poly(p)?, parse_poly(q)?)
    }

    /// `x' = y, y' = μ(1 − x²)y − x`.
    pub fn van_der_pol(mu: GaussianRational) -> Self {
        let label = format!("van_der_pol({mu})");
        let q = &(&(&Poly2::one() - &Poly2::x().pow(2)) * &Poly2::y()).scale(&mu) - &Poly2::x();
        Self::new(label, Poly2::y(), q).expect("real coefficients")
    }

    /// Polar form `r' = r(1 − r²)(4 − r²)`, `θ' = 1`: cycles at `r = 1, 2`.
    pub fn two_ring() -> Self {
        Self::parse(
            "two_ring",
            "-y + x*(1 - x^2 - y^2)*(4 - x^2 - y^2)",
            "x + y*(1 - x^2 - y^2)*(4 - x^2 - y^2)",
        )
        .expect("valid built-in")
    }

    pub fn linear_center() -> Self {
        Self::parse("linear_center", "-y", "x").expect("valid built-in")
    }

    pub fn euler() -> Self {
        Self::parse("euler", "x", "y").expect("valid built-in")
    }

    pub fn translation() -> Self {
        Self::parse("dx", "1", "0").expect("valid built-in")
    }

    /// `van_der_pol` (μ = 1), `two_ring`, `linear_center`, `euler`, `dx`.
    pub fn builtin(name: &str) -> Result<Self, FlowError> {
        match name {
            "van_der_pol" | "vdp" => Ok(Self::van_der_pol(GaussianRational::from_int(1))),
            "two_ring" => Ok(Self::two_ring()),
            "linear_center" | "center" => Ok(Self::linear_center()),
            "euler" => Ok(Self::euler()),
            "dx" | "translation" => Ok(Self::translation()),
            _ => Err(FlowError::UnknownField(name.to_string())),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        [self.compiled[0].eval(x, y), self.compiled[1].eval(x, y)]
    }

    /// `[[P_x, P_y], [Q_x, Q_y]]`.
    pub fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let j = |k: usize| self.jacobian[k].eval(x, y);
        [[j(0), j(1)], [j(2), j(3)]]
    }

    pub fn components(&self) -> (&Poly2, &Poly2) {
        (&self.exact[0], &self.exact[1])
    }

    /// The derivation `P ∂x + Q ∂y`.
    pub fn operator(&self) -> WeylOp {
        WeylOp::from_field(&self.exact[0], &self.exact[1])
    }
}
