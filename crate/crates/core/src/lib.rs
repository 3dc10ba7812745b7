//! Symbolic-numeric toolkit for two threads of operator theory on the plane
//! and on closed surfaces:
//!
//! * [`algebra`], [`corank`], [`spectral`]: exact coranks of polynomial
//!   vector-field operators `P∂x + Q∂y` on truncated polynomial spaces, their
//!   Fourier conjugates, principal symbols and pointwise ellipticity.
//! * [`geometry`], [`cocycle`]: Gauss-map curvature integrals, the cyclic
//!   3-cocycle `τ(f0,f1,f2) = ∬ f0 df1 df2`, the 2×2 Bott projection and
//!   deformation stability of `τ(E,E,E)`.
//! * [`flow`]: adaptive Runge-Kutta integration, return maps and limit-cycle
//!   detection, compared against corank bounds.

pub mod algebra;
pub mod cocycle;
pub mod corank;
pub mod dual;
pub mod flow;
pub mod geometry;
pub mod spectral;

use serde::Serialize;

/// Outcome vocabulary shared by every check and report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Consistent,
    Violation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Consistent => "CONSISTENT",
            Verdict::Violation => "VIOLATION",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
