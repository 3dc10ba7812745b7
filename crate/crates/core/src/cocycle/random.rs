//! Seeded random test functions and the identity-residual report.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{lift, tau_mat2_density, CDual, CocycleError, DualMat, Mat2Field, SurfaceFunction};
use crate::dual::Dual;
use crate::geometry::{pairwise_sum, ParamSurface, QuadratureRule, SampledSurface};
use crate::Verdict;

const MAX_FREQUENCY: i32 = 2;
const MAX_DEGREE: usize = 3;
const TERMS: usize = 3;
/// Threshold on every identity residual.
const IDENTITY_TOL: f64 = 1e-8;
/// Residuals below this are rounding noise; shrinkage is not required there.
const NOISE_FLOOR: f64 = 1e-11;

fn coefficient(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// A random trigonometric polynomial on the surface.
///
/// On doubly periodic charts this is `Σ c e^{i(a u + b v)}` with
/// `|a|, |b| ≤ 2`. Otherwise it is a polynomial of degree ≤ 3 in the
/// embedding coordinates, which on the polar chart of a sphere-like surface is
/// a trigonometric polynomial in `(θ, φ)` that stays smooth at the poles.
pub fn random_function(surface: Arc<ParamSurface>, rng: &mut impl Rng) -> SurfaceFunction {
    let periodic = surface.charts.iter().all(|c| c.periodic_u && c.periodic_v);
    if periodic {
        let terms: Vec<(f64, f64, Complex64)> = (0..TERMS)
            .map(|_| {
                let a = rng.gen_range(-MAX_FREQUENCY..=MAX_FREQUENCY) as f64;
                let b = rng.gen_range(-MAX_FREQUENCY..=MAX_FREQUENCY) as f64;
                (a, b, coefficient(rng))
            })
            .collect();
        SurfaceFunction::new(surface, "trig", move |s| {
            terms.iter().fold(Dual::constant(Complex64::new(0.0, 0.0)), |acc, &(a, b, c)| {
                let z = c * Complex64::new(0.0, a * s.u + b * s.v).exp();
                let i = Complex64::new(0.0, 1.0);
                acc + Dual::new(z, z * i * a, z * i * b)
            })
        })
    } else {
        let terms: Vec<([usize; 3], Complex64)> = (0..=TERMS)
            .map(|_| {
                let total = rng.gen_range(0..=MAX_DEGREE);
                let a = rng.gen_range(0..=total);
                let b = rng.gen_range(0..=total - a);
                ([a, b, total - a - b], coefficient(rng))
            })
            .collect();
        SurfaceFunction::new(surface, "poly", move |s| {
            let p: [CDual; 3] = s.position.map(lift);
            terms.iter().fold(Dual::constant(Complex64::new(0.0, 0.0)), |acc, (e, c)| {
                let mut m = Dual::constant(*c);
                for (k, &pk) in p.iter().enumerate() {
                    for _ in 0..e[k] {
                        m = m * pk;
                    }
                }
                acc + m
            })
        })
    }
}

pub fn random_matrix(surface: Arc<ParamSurface>, rng: &mut impl Rng) -> Mat2Field {
    let mut f = || random_function(surface.clone(), rng);
    Mat2Field::new([[f(), f()], [f(), f()]])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualLevel {
    pub resolution: usize,
    pub cyclic: f64,
    pub hochschild: f64,
    pub matrix_cyclic: f64,
    pub matrix_hochschild: f64,
}

impl ResidualLevel {
    fn all(&self) -> [f64; 4] {
        [self.cyclic, self.hochschild, self.matrix_cyclic, self.matrix_hochschild]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub surface: String,
    pub trials: usize,
    pub seed: u64,
    /// Maximum residuals at half resolution, then at full resolution.
    pub levels: [ResidualLevel; 2],
    pub tolerance: f64,
    pub noise_floor: f64,
    pub verdict: Verdict,
}

fn mat_mul(a: &DualMat, b: &DualMat) -> DualMat {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Node values of the random inputs for one trial.
struct TrialValues {
    scalars: Vec<[CDual; 4]>,
    matrices: Vec<[DualMat; 4]>,
}

/// Residuals of one trial, computed from cached node values. The integrands
/// are the same as those of [`tau`](super::tau) and [`tau_mat2`].
fn trial_residuals(sampled: &SampledSurface, vals: &TrialValues) -> [f64; 4] {
    let tau = |k: &dyn Fn(usize) -> Complex64| integrate_complex_indexed(sampled, k);
    let d = |a: CDual, b: CDual, c: CDual| a.val * b.wedge(c);
    let f = &vals.scalars;
    let cyclic = tau(&|n| d(f[n][0], f[n][1], f[n][2]) - d(f[n][1], f[n][2], f[n][0])).norm();
    let hochschild = tau(&|n| {
        let [a, b, c, e] = f[n];
        d(a * b, c, e) - d(a, b * c, e) + d(a, b, c * e) - d(e * a, b, c)
    })
    .norm();
    let m = &vals.matrices;
    let matrix_cyclic =
        tau(&|n| tau_mat2_density(&m[n][0], &m[n][1], &m[n][2]) - tau_mat2_density(&m[n][1], &m[n][2], &m[n][0]))
            .norm();
    let matrix_hochschild = tau(&|n| {
        let [a, b, c, e] = &m[n];
        tau_mat2_density(&mat_mul(a, b), c, e) - tau_mat2_density(a, &mat_mul(b, c), e)
            + tau_mat2_density(a, b, &mat_mul(c, e))
            - tau_mat2_density(&mat_mul(e, a), b, c)
    })
    .norm();
    [cyclic, hochschild, matrix_cyclic, matrix_hochschild]
}

fn integrate_complex_indexed(sampled: &SampledSurface, k: &dyn Fn(usize) -> Complex64) -> Complex64 {
    let (re, im): (Vec<f64>, Vec<f64>) = sampled
        .weights
        .iter()
        .enumerate()
        .map(|(n, w)| {
            let z = k(n) * w;
            (z.re, z.im)
        })
        .unzip();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

fn level(
    surface: &Arc<ParamSurface>,
    rule: QuadratureRule,
    trials: usize,
    seed: u64,
) -> Result<ResidualLevel, CocycleError> {
    let sampled = SampledSurface::new(surface, rule)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 4];
    for _ in 0..trials {
        let f: Vec<SurfaceFunction> = (0..4).map(|_| random_function(surface.clone(), &mut rng)).collect();
        let m: Vec<Mat2Field> = (0..4).map(|_| random_matrix(surface.clone(), &mut rng)).collect();
        let vals = TrialValues {
            scalars: sampled.samples.iter().map(|s| [0, 1, 2, 3].map(|i| f[i].eval(s))).collect(),
            matrices: sampled.samples.iter().map(|s| [0, 1, 2, 3].map(|i| m[i].eval(s))).collect(),
        };
        for (w, r) in worst.iter_mut().zip(trial_residuals(&sampled, &vals)) {
            *w = w.max(r);
        }
    }
    let [cyclic, hochschild, matrix_cyclic, matrix_hochschild] = worst;
    Ok(ResidualLevel { resolution: rule.resolution, cyclic, hochschild, matrix_cyclic, matrix_hochschild })
}

/// Cyclic and Hochschild residuals of `τ` and `τ₂` on `trials` random
/// inputs, at `rule` and at half its resolution (same inputs at both).
pub fn identity_residuals(
    surface: &ParamSurface,
    rule: QuadratureRule,
    trials: usize,
    seed: u64,
) -> Result<IdentityReport, CocycleError> {
    let surface = Arc::new(surface.clone());
    let coarse_rule = QuadratureRule::new((rule.resolution / 2).max(QuadratureRule::MIN_RESOLUTION))?;
    let coarse = level(&surface, coarse_rule, trials, seed)?;
    let fine = level(&surface, rule, trials, seed)?;
    let small = fine.all().iter().all(|r| *r < IDENTITY_TOL);
    let shrinks = coarse.all().iter().zip(fine.all()).all(|(c, f)| f <= (c / 4.0).max(NOISE_FLOOR));
    Ok(IdentityReport {
        surface: surface.kind.to_string(),
        trials,
        seed,
        levels: [coarse, fine],
        tolerance: IDENTITY_TOL,
        noise_floor: NOISE_FLOOR,
        verdict: if small && shrinks { Verdict::Pass } else { Verdict::Fail },
    })
}
