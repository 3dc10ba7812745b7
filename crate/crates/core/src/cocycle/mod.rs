//! The trilinear functional `τ(f0, f1, f2) = ∬ f0 df1 ∧ df2` on smooth
//! functions of a closed surface, its 2×2 matrix extension, and the
//! projection-valued quantities built on it.
//!
//! All integrals run over the nodes of a [`SampledSurface`]; functions are
//! evaluated together with their chart partials so that `df1 ∧ df2` is exact
//! at each node.
//!
//! The matrix extension of `τ` to `M₂(A)` is fixed on elementary matrices by
//! `τ(δ_ij(a), δ_i'j'(b), δ_i''j''(c)) = τ(a, b, c) · tr(δ_ij δ_i'j' δ_i''j'')`.
//! The trace of a product of three matrix units is 1 exactly when the indices
//! chain (`j = i'`, `j' = i''`, `j'' = i`) and 0 otherwise, so trilinearity
//! leaves `τ₂(A, B, C) = Σ_ijk τ(A_ij, B_jk, C_ki)`, i.e. the integral of
//! `tr(A (B_u C_v − B_v C_u))`.

mod projection;
mod random;
mod symbolic;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::dual::Dual;
use crate::geometry::{pairwise_sum, GaussMapSample, GeometryError, ParamSurface, SampledSurface};

pub use projection::{
    bott_projection, commutator_structure_check, lambda_estimate, literal_bott_form, stability_check,
    CommutatorReport, CurveFamily, LambdaEstimate, ProjectionCurve, StabilityReport, StabilitySample,
    LAMBDA_GUARD,
};
pub use random::{identity_residuals, random_function, random_matrix, IdentityReport};
pub use symbolic::{symbolic_density_ratio, symbolic_lambda, SymbolicLambda};

/// A complex value with its `(u, v)` partials.
pub type CDual = Dual<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error("functions live on different surfaces ({0} vs {1})")]
    SurfaceMismatch(String, String),
    #[error("|∬ f dg dh| = {0:e} is too small to divide by")]
    DegenerateDenominator(f64),
    #[error("time stencil [{lo}, {hi}] leaves the curve parameter range [0, {t_max}]")]
    StencilOutOfRange { lo: f64, hi: f64, t_max: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn lift(d: Dual<f64>) -> CDual {
    Dual::new(d.val.into(), d.du.into(), d.dv.into())
}

type Evaluator = dyn Fn(&GaussMapSample) -> CDual + Send + Sync;

/// A smooth complex function on a surface, evaluated at Gauss-map samples.
#[derive(Clone)]
pub struct SurfaceFunction {
    surface: Arc<ParamSurface>,
    label: String,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for SurfaceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceFunction({} on {})", self.label, self.surface.kind)
    }
}

impl SurfaceFunction {
    pub fn new(
        surface: Arc<ParamSurface>,
        label: impl Into<String>,
        eval: impl Fn(&GaussMapSample) -> CDual + Send + Sync + 'static,
    ) -> Self {
        Self { surface, label: label.into(), eval: Arc::new(eval) }
    }

    pub fn constant(surface: Arc<ParamSurface>, c: Complex64) -> Self {
        Self::new(surface, format!("{c}"), move |_| Dual::constant(c))
    }

    pub fn zero(surface: Arc<ParamSurface>) -> Self {
        Self::constant(surface, Complex64::new(0.0, 0.0))
    }

    /// Component `i` of the unit normal: `f`, `g`, `h` for `i = 0, 1, 2`.
    pub fn gauss_component(surface: Arc<ParamSurface>, i: usize) -> Self {
        Self::new(surface, ["f", "g", "h"][i], move |s| lift(s.normal[i]))
    }

    /// Embedding coordinate `x`, `y` or `z`.
    pub fn coordinate(surface: Arc<ParamSurface>, i: usize) -> Self {
        Self::new(surface, ["x", "y", "z"][i], move |s| lift(s.position[i]))
    }

    pub fn surface(&self) -> &ParamSurface {
        &self.surface
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, s: &GaussMapSample) -> CDual {
        (self.eval)(s)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(self.surface.clone(), format!("({} + {})", self.label, other.label), move |s| {
            a.eval(s) + b.eval(s)
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(self.surface.clone(), format!("({} - {})", self.label, other.label), move |s| {
            a.eval(s) - b.eval(s)
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(self.surface.clone(), format!("{}*{}", self.label, other.label), move |s| {
            a.eval(s) * b.eval(s)
        })
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let a = self.clone();
        Self::new(self.surface.clone(), format!("{k}*{}", self.label), move |s| a.eval(s).scale(k))
    }

    pub fn conj(&self) -> Self {
        let a = self.clone();
        Self::new(self.surface.clone(), format!("conj({})", self.label), move |s| {
            let d = a.eval(s);
            Dual::new(d.val.conj(), d.du.conj(), d.dv.conj())
        })
    }
}

fn check_surface(sampled: &SampledSurface, fs: &[&SurfaceFunction]) -> Result<(), CocycleError> {
    for f in fs {
        if *f.surface != sampled.surface {
            return Err(CocycleError::SurfaceMismatch(
                f.surface.kind.to_string(),
                sampled.surface.kind.to_string(),
            ));
        }
    }
    Ok(())
}

/// Weighted sum of complex node values in fixed pairwise order.
pub fn integrate_complex(sampled: &SampledSurface, mut integrand: impl FnMut(&GaussMapSample) -> Complex64) -> Complex64 {
    let (re, im): (Vec<f64>, Vec<f64>) = sampled
        .samples
        .iter()
        .zip(&sampled.weights)
        .map(|(s, w)| {
            let z = integrand(s) * w;
            (z.re, z.im)
        })
        .unzip();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

/// `τ(f0, f1, f2) = ∬ f0 (∂u f1 ∂v f2 − ∂v f1 ∂u f2) du dv`.
pub fn tau(
    f0: &SurfaceFunction,
    f1: &SurfaceFunction,
    f2: &SurfaceFunction,
    sampled: &SampledSurface,
) -> Result<Complex64, CocycleError> {
    check_surface(sampled, &[f0, f1, f2])?;
    Ok(integrate_complex(sampled, |s| f0.eval(s).val * f1.eval(s).wedge(f2.eval(s))))
}

/// `|τ(f0, f1, f2) − τ(f1, f2, f0)|`.
pub fn cyclic_defect(
    f0: &SurfaceFunction,
    f1: &SurfaceFunction,
    f2: &SurfaceFunction,
    sampled: &SampledSurface,
) -> Result<f64, CocycleError> {
    Ok((tau(f0, f1, f2, sampled)? - tau(f1, f2, f0, sampled)?).norm())
}

/// Modulus of the Hochschild coboundary
/// `τ(f0f1, f2, f3) − τ(f0, f1f2, f3) + τ(f0, f1, f2f3) − τ(f3f0, f1, f2)`.
pub fn hochschild_defect(
    f0: &SurfaceFunction,
    f1: &SurfaceFunction,
    f2: &SurfaceFunction,
    f3: &SurfaceFunction,
    sampled: &SampledSurface,
) -> Result<f64, CocycleError> {
    let sum = tau(&f0.mul(f1), f2, f3, sampled)? - tau(f0, &f1.mul(f2), f3, sampled)?
        + tau(f0, f1, &f2.mul(f3), sampled)?
        - tau(&f3.mul(f0), f1, f2, sampled)?;
    Ok(sum.norm())
}

/// Pointwise 2×2 matrix of complex duals.
pub type DualMat = [[CDual; 2]; 2];

/// A 2×2 matrix of functions on one surface.
#[derive(Clone, Debug)]
pub struct Mat2Field {
    pub entries: [[SurfaceFunction; 2]; 2],
}

impl Mat2Field {
    pub fn new(entries: [[SurfaceFunction; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn diagonal(a: SurfaceFunction, b: SurfaceFunction) -> Self {
        let z = SurfaceFunction::zero(a.surface.clone());
        Self::new([[a, z.clone()], [z, b]])
    }

    pub fn scalar(f: SurfaceFunction) -> Self {
        Self::diagonal(f.clone(), f)
    }

    pub fn zero(surface: Arc<ParamSurface>) -> Self {
        Self::scalar(SurfaceFunction::zero(surface))
    }

    pub fn identity(surface: Arc<ParamSurface>) -> Self {
        Self::scalar(SurfaceFunction::constant(surface, Complex64::new(1.0, 0.0)))
    }

    pub fn surface(&self) -> &ParamSurface {
        self.entries[0][0].surface()
    }

    /// Entrywise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new([[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]])
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        Self::new([[a[0][0].add(&b[0][0]), a[0][1].add(&b[0][1])], [a[1][0].add(&b[1][0]), a[1][1].add(&b[1][1])]])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let entry = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        Self::new([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn eval(&self, s: &GaussMapSample) -> DualMat {
        let e = &self.entries;
        [[e[0][0].eval(s), e[0][1].eval(s)], [e[1][0].eval(s), e[1][1].eval(s)]]
    }

    fn functions(&self) -> [&SurfaceFunction; 4] {
        let e = &self.entries;
        [&e[0][0], &e[0][1], &e[1][0], &e[1][1]]
    }
}

/// `tr(A (B_u C_v − B_v C_u))` at one node.
pub fn tau_mat2_density(a: &DualMat, b: &DualMat, c: &DualMat) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                total += a[i][j].val * b[j][k].wedge(c[k][i]);
            }
        }
    }
    total
}

/// `τ₂(A, B, C) = Σ_ijk τ(A_ij, B_jk, C_ki)`.
pub fn tau_mat2(a: &Mat2Field, b: &Mat2Field, c: &Mat2Field, sampled: &SampledSurface) -> Result<Complex64, CocycleError> {
    for m in [a, b, c] {
        check_surface(sampled, &m.functions())?;
    }
    Ok(integrate_complex(sampled, |s| tau_mat2_density(&a.eval(s), &b.eval(s), &c.eval(s))))
}

/// Entrywise max modulus of a pointwise complex 2×2 matrix.
pub fn entry_norm(m: &[[Complex64; 2]; 2]) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn values(m: &DualMat) -> [[Complex64; 2]; 2] {
    [[m[0][0].val, m[0][1].val], [m[1][0].val, m[1][1].val]]
}

/// `max(‖E² − E‖, ‖E − E*‖)` at one node, entrywise max modulus.
pub fn pointwise_projection_defect(e: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let sq = e[i][0] * e[0][j] + e[i][1] * e[1][j];
            worst = worst.max((sq - e[i][j]).norm());
            worst = worst.max((e[i][j] - e[j][i].conj()).norm());
        }
    }
    worst
}

/// Max over nodes of the projection defect.
pub fn projection_defect(e: &Mat2Field, sampled: &SampledSurface) -> f64 {
    sampled
        .samples
        .iter()
        .map(|s| pointwise_projection_defect(&values(&e.eval(s))))
        .fold(0.0, f64::max)
}
