//! The Bott projection of a Gauss map, curves of projections, and the
//! stability of `τ₂(E, E, E)` along them.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::{entry_norm, projection_defect, tau_mat2, CDual, CocycleError, Mat2Field, SurfaceFunction};
use crate::dual::Dual;
use crate::geometry::{integrate_fdgdh_sampled, ComponentOrder, GaussMapSample, ParamSurface, QuadratureRule, SampledSurface};
use crate::Verdict;

/// `|∬ f dg dh|` below this is treated as zero in [`lambda_estimate`].
pub const LAMBDA_GUARD: f64 = 1e-9;

/// Threshold on `τ₂` and `∬K` drift along a curve.
const STABILITY_TOL: f64 = 1e-6;
/// Largest projection defect accepted for a curve member.
const PROJECTION_TOL: f64 = 1e-10;
const COMMUTATOR_TOL: f64 = 1e-4;
const HALVING_RATIO: f64 = 3.5;
/// Residuals at or below this are finite-difference rounding, not truncation.
const RESIDUAL_NOISE: f64 = 1e-11;

fn half(z: CDual) -> CDual {
    z.scale(Complex64::new(0.5, 0.0))
}

fn bott_entry(s: &GaussMapSample, i: usize, j: usize, literal: bool) -> CDual {
    let [f, g, h] = s.normal.map(super::lift);
    let one = Dual::constant(Complex64::new(1.0, 0.0));
    let ig = g.scale(Complex64::new(0.0, 1.0));
    half(match (i, j) {
        (0, 0) if literal => one - h,
        (0, 0) => one + h,
        (0, 1) => f + ig,
        (1, 0) => f - ig,
        _ => one - h,
    })
}

fn bott_field(surface: Arc<ParamSurface>, literal: bool) -> Mat2Field {
    let entry = |i: usize, j: usize| {
        SurfaceFunction::new(surface.clone(), format!("E{}{}", i + 1, j + 1), move |s| bott_entry(s, i, j, literal))
    };
    Mat2Field::new([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
}

/// `E = ½ [[1 + h, f + ig], [f − ig, 1 − h]]` for the Gauss map `(f, g, h)`.
pub fn bott_projection(surface: Arc<ParamSurface>) -> Mat2Field {
    bott_field(surface, false)
}

/// `½ [[1 − h, f + ig], [f − ig, 1 − h]]`, which is not idempotent; kept as a
/// negative control.
pub fn literal_bott_form(surface: Arc<ParamSurface>) -> Mat2Field {
    bott_field(surface, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub tau2: [f64; 2],
    pub fdgdh: f64,
    /// `τ₂(E, E, E) / ∬ f dg dh` as `[re, im]`.
    pub lambda: [f64; 2],
}

impl LambdaEstimate {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda[0], self.lambda[1])
    }
}

pub fn lambda_estimate(surface: &ParamSurface, rule: QuadratureRule) -> Result<LambdaEstimate, CocycleError> {
    let sampled = SampledSurface::new(surface, rule)?;
    let e = bott_projection(Arc::new(surface.clone()));
    let t = tau_mat2(&e, &e, &e, &sampled)?;
    let d = integrate_fdgdh_sampled(&sampled, ComponentOrder::Fgh);
    if d.abs() < LAMBDA_GUARD {
        return Err(CocycleError::DegenerateDenominator(d));
    }
    let l = t / d;
    Ok(LambdaEstimate { tau2: [t.re, t.im], fdgdh: d, lambda: [l.re, l.im] })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveFamily {
    /// Bott projections of `bumped_sphere(t, k)`.
    BumpedSphere { k: u32 },
    /// The unit sphere rotated by `speed · t` about `axis`.
    RotatedSphere { axis: [f64; 3], speed: f64 },
    /// `E(t) = E(0)` of the unit sphere.
    Constant,
    /// `bumped_sphere` projections plus `amount · t · I`; not idempotent for `t ≠ 0`.
    Corrupted { k: u32, amount: f64 },
}

/// A sampled curve `t ↦ E(t)` on `t ∈ [0, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectionCurve {
    pub family: CurveFamily,
    pub t_max: f64,
    pub samples: usize,
}

impl ProjectionCurve {
    pub fn new(family: CurveFamily, t_max: f64, samples: usize) -> Result<Self, CocycleError> {
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(CocycleError::InvalidCurve(format!("t_max must be finite and nonnegative, got {t_max}")));
        }
        if samples < 2 {
            return Err(CocycleError::InvalidCurve(format!("need at least 2 samples, got {samples}")));
        }
        let curve = Self { family, t_max, samples };
        curve.surface_at(t_max)?;
        Ok(curve)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.samples - 1;
        (0..=n).map(|i| self.t_max * i as f64 / n as f64).collect()
    }

    pub fn surface_at(&self, t: f64) -> Result<ParamSurface, CocycleError> {
        Ok(match self.family {
            CurveFamily::BumpedSphere { k } | CurveFamily::Corrupted { k, .. } => ParamSurface::bumped_sphere(t, k)?,
            CurveFamily::RotatedSphere { axis, speed } => ParamSurface::sphere().rotated(axis, speed * t),
            CurveFamily::Constant => ParamSurface::sphere(),
        })
    }

    pub fn projection_at(&self, t: f64) -> Result<Mat2Field, CocycleError> {
        let surface = Arc::new(self.surface_at(t)?);
        let e = bott_projection(surface.clone());
        Ok(match self.family {
            CurveFamily::Corrupted { amount, .. } => {
                let shift = SurfaceFunction::constant(surface, Complex64::new(amount * t, 0.0));
                e.add(&Mat2Field::scalar(shift))
            }
            _ => e,
        })
    }

    /// Pointwise value of `E(t)` at a chart point.
    fn value_at(&self, t: f64, chart: usize, u: f64, v: f64) -> Result<[[Complex64; 2]; 2], CocycleError> {
        let surface = self.surface_at(t)?;
        let s = surface.gauss_map(chart, u, v)?;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = bott_entry(&s, i, j, false).val;
            }
        }
        if let CurveFamily::Corrupted { amount, .. } = self.family {
            m[0][0] += amount * t;
            m[1][1] += amount * t;
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilitySample {
    pub t: f64,
    pub tau2: [f64; 2],
    pub total_curvature: f64,
    pub projection_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub curve: ProjectionCurve,
    pub resolution: usize,
    pub samples: Vec<StabilitySample>,
    /// `max_t |τ₂(E(t)) − τ₂(E(0))|`.
    pub max_tau_deviation: f64,
    pub max_curvature_deviation: f64,
    pub max_projection_defect: f64,
    pub verdict: Verdict,
}

pub fn stability_check(curve: &ProjectionCurve, rule: QuadratureRule) -> Result<StabilityReport, CocycleError> {
    let mut samples = Vec::with_capacity(curve.samples);
    for t in curve.t_grid() {
        let surface = curve.surface_at(t)?;
        let sampled = SampledSurface::new(&surface, rule)?;
        let e = curve.projection_at(t)?;
        let tau2 = tau_mat2(&e, &e, &e, &sampled)?;
        samples.push(StabilitySample {
            t,
            tau2: [tau2.re, tau2.im],
            total_curvature: sampled.integrate(GaussMapSample::curvature_density),
            projection_defect: projection_defect(&e, &sampled),
        });
    }
    let first = samples[0];
    let tau0 = Complex64::new(first.tau2[0], first.tau2[1]);
    let max_tau_deviation = samples
        .iter()
        .map(|s| (Complex64::new(s.tau2[0], s.tau2[1]) - tau0).norm())
        .fold(0.0, f64::max);
    let max_curvature_deviation =
        samples.iter().map(|s| (s.total_curvature - first.total_curvature).abs()).fold(0.0, f64::max);
    let max_projection_defect = samples.iter().map(|s| s.projection_defect).fold(0.0, f64::max);
    let pass = max_tau_deviation < STABILITY_TOL
        && max_curvature_deviation < STABILITY_TOL
        && max_projection_defect < PROJECTION_TOL;
    Ok(StabilityReport {
        curve: *curve,
        resolution: rule.resolution,
        samples,
        max_tau_deviation,
        max_curvature_deviation,
        max_projection_defect,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub t0: f64,
    pub dt: [f64; 2],
    /// `max ‖Ė − (ĖE + EĖ)‖` at `dt` and `dt / 2`.
    pub idempotent_residual: [f64; 2],
    /// `max ‖Ė − [[Ė, E], E]‖` at `dt` and `dt / 2`.
    pub commutator_residual: [f64; 2],
    pub idempotent_ratio: f64,
    pub commutator_ratio: f64,
    pub nodes: usize,
    pub verdict: Verdict,
}

type M2 = [[Complex64; 2]; 2];

fn mm(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn lin(a: &M2, b: &M2, alpha: f64, beta: f64) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][j] * alpha + b[i][j] * beta;
        }
    }
    out
}

/// Both residuals at one stencil spacing, maximized over nodes.
fn residuals(
    curve: &ProjectionCurve,
    t0: f64,
    dt: f64,
    nodes: &[(usize, f64, f64)],
) -> Result<(f64, f64), CocycleError> {
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for &(c, u, v) in nodes {
        let e = curve.value_at(t0, c, u, v)?;
        let plus = curve.value_at(t0 + dt, c, u, v)?;
        let minus = curve.value_at(t0 - dt, c, u, v)?;
        let edot = lin(&plus, &minus, 0.5 / dt, -0.5 / dt);
        let sym = lin(&mm(&edot, &e), &mm(&e, &edot), 1.0, 1.0);
        r1 = r1.max(entry_norm(&lin(&edot, &sym, 1.0, -1.0)));
        let x = lin(&mm(&edot, &e), &mm(&e, &edot), 1.0, -1.0);
        let nested = lin(&mm(&x, &e), &mm(&e, &x), 1.0, -1.0);
        r2 = r2.max(entry_norm(&lin(&edot, &nested, 1.0, -1.0)));
    }
    Ok((r1, r2))
}

fn improvement(coarse: f64, fine: f64) -> f64 {
    if fine == 0.0 {
        if coarse == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        coarse / fine
    }
}

/// Checks `Ė = ĖE + EĖ` and `Ė = [[Ė, E], E]` with central differences at
/// `dt` and `dt / 2` on the nodes of `rule`.
pub fn commutator_structure_check(
    curve: &ProjectionCurve,
    t0: f64,
    dt: f64,
    rule: QuadratureRule,
) -> Result<CommutatorReport, CocycleError> {
    let (lo, hi) = (t0 - dt, t0 + dt);
    if dt.is_nan() || dt <= 0.0 || lo < 0.0 || hi > curve.t_max {
        return Err(CocycleError::StencilOutOfRange { lo, hi, t_max: curve.t_max });
    }
    let nodes: Vec<(usize, f64, f64)> =
        rule.nodes(&curve.surface_at(t0)?).iter().map(|n| (n.chart, n.u, n.v)).collect();
    let (a1, a2) = residuals(curve, t0, dt, &nodes)?;
    let (b1, b2) = residuals(curve, t0, dt / 2.0, &nodes)?;
    let ok = |coarse: f64, fine: f64| {
        coarse < COMMUTATOR_TOL && (fine <= RESIDUAL_NOISE || improvement(coarse, fine) >= HALVING_RATIO)
    };
    let pass = ok(a1, b1) && ok(a2, b2);
    Ok(CommutatorReport {
        t0,
        dt: [dt, dt / 2.0],
        idempotent_residual: [a1, b1],
        commutator_residual: [a2, b2],
        idempotent_ratio: improvement(a1, b1),
        commutator_ratio: improvement(a2, b2),
        nodes: nodes.len(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{pointwise_projection_defect, values};

    fn at(n: [f64; 3]) -> GaussMapSample {
        GaussMapSample {
            chart: 0,
            u: 0.0,
            v: 0.0,
            position: [Dual::constant(0.0); 3],
            normal: n.map(Dual::constant),
            area: 1.0,
        }
    }

    fn pointwise(e: &Mat2Field, s: &GaussMapSample) -> M2 {
        values(&e.eval(s))
    }

    #[test]
    fn pointwise_examples() {
        let e = bott_projection(Arc::new(ParamSurface::sphere()));
        let m = pointwise(&e, &at([0.0, 0.0, 1.0]));
        assert_eq!(m, [[1.0.into(), 0.0.into()], [0.0.into(), 0.0.into()]]);
        let m = pointwise(&e, &at([1.0, 0.0, 0.0]));
        assert_eq!(m, [[0.5.into(), 0.5.into()], [0.5.into(), 0.5.into()]]);
    }

    #[test]
    fn literal_form_defect_peaks_at_a_quarter() {
        let e = literal_bott_form(Arc::new(ParamSurface::sphere()));
        let h = 0.5f64.sqrt();
        let m = pointwise(&e, &at([h, 0.0, h]));
        assert!((pointwise_projection_defect(&m) - 0.25).abs() < 1e-15);
        // diagonal of E² − E vanishes identically
        let sq = mm(&m, &m);
        assert!((sq[0][0] - m[0][0]).norm() < 1e-15);
    }

    #[test]
    fn stencil_range_is_checked() {
        let c = ProjectionCurve::new(CurveFamily::BumpedSphere { k: 1 }, 0.2, 11).unwrap();
        let r = QuadratureRule::new(4).unwrap();
        assert!(matches!(
            commutator_structure_check(&c, 0.0, 1e-3, r),
            Err(CocycleError::StencilOutOfRange { .. })
        ));
    }

    #[test]
    fn curve_parameters_are_validated() {
        assert!(ProjectionCurve::new(CurveFamily::BumpedSphere { k: 1 }, 0.9, 11).is_err());
        assert!(ProjectionCurve::new(CurveFamily::Constant, 0.2, 1).is_err());
    }
}
