//! Parametrized closed surfaces, their Gauss maps and curvature integrals.
//!
//! Curvature is integrated through the Gauss map: with `N` the outward unit
//! normal in chart coordinates `(u, v)`, `K dS = det[N, N_u, N_v] du dv`. The
//! components `N = (f, g, h)` also give the Stokes-type integrals
//! `∬ f dg dh`, each equal to a third of `∬ K dS`.
//!
//! Totals are compared with `2πχ`.

mod quadrature;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dual::{cross, Dual, Jet2};

pub use quadrature::{pairwise_sum, Rule1D};

/// Largest `|t|` accepted by [`ParamSurface::bumped_sphere`]. The bump
/// profile satisfies `|h_k| ≤ 2` on the unit sphere, so the radial graph
/// `(1 + t h_k) s` stays star-shaped with radius at least `0.2`.
pub const BUMP_T_MAX: f64 = 0.4;

/// Below this `|r_u × r_v|` a node is rejected as degenerate.
pub const DEGENERATE_NORMAL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid surface parameters: {0}")]
    InvalidParameter(String),
    #[error("unknown surface `{0}` (expected sphere, torus(R,r), ellipsoid(a,b,c) or bumped_sphere(t,k))")]
    UnknownSurface(String),
    #[error("resolution {0} is below the minimum of 4")]
    ResolutionTooSmall(usize),
    #[error("degenerate parametrization at chart {chart}, (u, v) = ({u}, {v}): |r_u x r_v| = {norm:e}")]
    DegenerateNode { chart: usize, u: f64, v: f64, norm: f64 },
}

/// A coordinate rectangle with per-direction periodicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chart {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub periodic_u: bool,
    pub periodic_v: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceKind {
    Sphere,
    Torus { major: f64, minor: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    BumpedSphere { t: f64, k: u32 },
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::Sphere => write!(f, "sphere"),
            SurfaceKind::Torus { major, minor } => write!(f, "torus({major},{minor})"),
            SurfaceKind::Ellipsoid { a, b, c } => write!(f, "ellipsoid({a},{b},{c})"),
            SurfaceKind::BumpedSphere { t, k } => write!(f, "bumped_sphere({t},{k})"),
        }
    }
}

/// A closed surface given by charts, optionally followed by a rigid rotation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamSurface {
    pub kind: SurfaceKind,
    pub charts: Vec<Chart>,
    pub euler_characteristic: i32,
    pub rotation: Option<[[f64; 3]; 3]>,
}

fn rect(u: (f64, f64), v: (f64, f64), periodic_u: bool, periodic_v: bool) -> Chart {
    Chart { u, v, periodic_u, periodic_v }
}

/// Polar chart: `u = θ ∈ (0, π)`, `v = φ` periodic.
fn polar_chart() -> Vec<Chart> {
    vec![rect((0.0, PI), (0.0, 2.0 * PI), false, true)]
}

fn positive(name: &str, x: f64) -> Result<(), GeometryError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

impl ParamSurface {
    pub fn sphere() -> Self {
        Self { kind: SurfaceKind::Sphere, charts: polar_chart(), euler_characteristic: 2, rotation: None }
    }

    pub fn torus(major: f64, minor: f64) -> Result<Self, GeometryError> {
        positive("minor radius", minor)?;
        positive("major radius", major)?;
        if major <= minor {
            return Err(GeometryError::InvalidParameter(format!(
                "torus needs R > r, got R = {major}, r = {minor}"
            )));
        }
        Ok(Self {
            kind: SurfaceKind::Torus { major, minor },
            charts: vec![rect((0.0, 2.0 * PI), (0.0, 2.0 * PI), true, true)],
            euler_characteristic: 0,
            rotation: None,
        })
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        positive("a", a)?;
        positive("b", b)?;
        positive("c", c)?;
        Ok(Self {
            kind: SurfaceKind::Ellipsoid { a, b, c },
            charts: polar_chart(),
            euler_characteristic: 2,
            rotation: None,
        })
    }

    /// Radial graph `(1 + t h_k(s)) s` over the unit sphere with
    /// `h_k(s) = Re((s_x + i s_y)^k) + s_z²`.
    pub fn bumped_sphere(t: f64, k: u32) -> Result<Self, GeometryError> {
        if !t.is_finite() || t.abs() > BUMP_T_MAX {
            return Err(GeometryError::InvalidParameter(format!(
                "bumped_sphere needs |t| <= {BUMP_T_MAX}, got {t}"
            )));
        }
        if k == 0 || k > 16 {
            return Err(GeometryError::InvalidParameter(format!(
                "bump profile k must be in 1..=16, got {k}"
            )));
        }
        Ok(Self {
            kind: SurfaceKind::BumpedSphere { t, k },
            charts: polar_chart(),
            euler_characteristic: 2,
            rotation: None,
        })
    }

    /// The same surface moved by the rotation of `angle` about `axis`.
    pub fn rotated(mut self, axis: [f64; 3], angle: f64) -> Self {
        let r = rotation_matrix(axis, angle);
        self.rotation = Some(match self.rotation {
            Some(prev) => matmul3(&r, &prev),
            None => r,
        });
        self
    }

    /// Point map with second-order jets in the chart coordinates.
    pub fn point_jet(&self, u: f64, v: f64) -> [Jet2; 3] {
        let (ju, jv) = (Jet2::var_u(u), Jet2::var_v(v));
        let p = match self.kind {
            SurfaceKind::Sphere => unit_sphere(ju, jv),
            SurfaceKind::Ellipsoid { a, b, c } => {
                let s = unit_sphere(ju, jv);
                [s[0] * a, s[1] * b, s[2] * c]
            }
            SurfaceKind::Torus { major, minor } => {
                let ring = jv.cos() * minor + major;
                [ring * ju.cos(), ring * ju.sin(), jv.sin() * minor]
            }
            SurfaceKind::BumpedSphere { t, k } => {
                let s = unit_sphere(ju, jv);
                let bump = ju.sin().powi(k) * (jv * k as f64).cos() + s[2] * s[2];
                let radius = bump * t + 1.0;
                [s[0] * radius, s[1] * radius, s[2] * radius]
            }
        };
        match &self.rotation {
            None => p,
            Some(r) => {
                let row = |i: usize| p[0] * r[i][0] + p[1] * r[i][1] + p[2] * r[i][2];
                [row(0), row(1), row(2)]
            }
        }
    }

    pub fn point(&self, u: f64, v: f64) -> [f64; 3] {
        self.point_jet(u, v).map(|j| j.val)
    }

    /// Normal 2π-normalized total curvature `2πχ`.
    pub fn expected_total_curvature(&self) -> f64 {
        2.0 * PI * self.euler_characteristic as f64
    }

    /// Unit normal and its first partials at a chart point.
    pub fn gauss_map(&self, chart: usize, u: f64, v: f64) -> Result<GaussMapSample, GeometryError> {
        let r = self.point_jet(u, v);
        let ru = r.map(Jet2::d_u);
        let rv = r.map(Jet2::d_v);
        let n = cross(ru, rv);
        let len2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
        let len = len2.sqrt();
        if len.val.is_nan() || len.val < DEGENERATE_NORMAL {
            return Err(GeometryError::DegenerateNode { chart, u, v, norm: len.val });
        }
        Ok(GaussMapSample {
            chart,
            u,
            v,
            position: r.map(Jet2::first_order),
            normal: n.map(|c| c / len),
            area: len.val,
        })
    }
}

fn unit_sphere(theta: Jet2, phi: Jet2) -> [Jet2; 3] {
    let st = theta.sin();
    [st * phi.cos(), st * phi.sin(), theta.cos()]
}

fn rotation_matrix(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let [x, y, z] = axis.map(|c| c / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

fn matmul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

impl FromStr for ParamSurface {
    type Err = GeometryError;

    /// Accepts `sphere`, `torus`, `torus(R,r)`, `ellipsoid(a,b,c)` and
    /// `bumped_sphere(t,k)`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match compact.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| GeometryError::UnknownSurface(s.to_string()))?;
                let args = inner
                    .split(',')
                    .map(|a| a.parse::<f64>().map_err(|_| GeometryError::UnknownSurface(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                (name.to_string(), args)
            }
            None => (compact.clone(), Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(GeometryError::InvalidParameter(format!(
                    "{name} takes {n} parameters, got {}",
                    args.len()
                )))
            }
        };
        match name.as_str() {
            "sphere" => arity(0).map(|_| Self::sphere()),
            "torus" if args.is_empty() => Self::torus(2.0, 1.0),
            "torus" => arity(2).and_then(|_| Self::torus(args[0], args[1])),
            "ellipsoid" => arity(3).and_then(|_| Self::ellipsoid(args[0], args[1], args[2])),
            "bumped_sphere" => {
                arity(2)?;
                let k = args[1];
                if k.fract() != 0.0 || k < 0.0 {
                    return Err(GeometryError::InvalidParameter(format!(
                        "bump profile k must be a positive integer, got {k}"
                    )));
                }
                Self::bumped_sphere(args[0], k as u32)
            }
            _ => Err(GeometryError::UnknownSurface(s.to_string())),
        }
    }
}

/// Chart data at one node: position and unit normal with first partials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussMapSample {
    pub chart: usize,
    pub u: f64,
    pub v: f64,
    pub position: [Dual<f64>; 3],
    /// `N = (f, g, h)`.
    pub normal: [Dual<f64>; 3],
    /// `|r_u × r_v|`.
    pub area: f64,
}

impl GaussMapSample {
    /// `det[N, N_u, N_v]`, the curvature density in chart coordinates.
    pub fn curvature_density(&self) -> f64 {
        let [f, g, h] = self.normal;
        f.val * g.wedge(h) + g.val * h.wedge(f) + h.val * f.wedge(g)
    }

    pub fn unit_defect(&self) -> f64 {
        let [f, g, h] = self.normal;
        (f.val * f.val + g.val * g.val + h.val * h.val - 1.0).abs()
    }
}

/// A tensor-product rule with `resolution` nodes per direction on each chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadratureRule {
    pub resolution: usize,
}

/// A weighted node on a chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadNode {
    pub chart: usize,
    pub u: f64,
    pub v: f64,
    pub weight: f64,
}

impl QuadratureRule {
    pub const MIN_RESOLUTION: usize = 4;

    pub fn new(resolution: usize) -> Result<Self, GeometryError> {
        if resolution < Self::MIN_RESOLUTION {
            return Err(GeometryError::ResolutionTooSmall(resolution));
        }
        Ok(Self { resolution })
    }

    pub fn rule_1d(&self, (a, b): (f64, f64), periodic: bool) -> Rule1D {
        if periodic {
            Rule1D::periodic_trapezoid(self.resolution, a, b)
        } else {
            Rule1D::gauss_legendre(self.resolution, a, b)
        }
    }

    /// All nodes over all charts, in chart-major, `u`-major order.
    pub fn nodes(&self, surface: &ParamSurface) -> Vec<QuadNode> {
        let mut out = Vec::new();
        for (c, chart) in surface.charts.iter().enumerate() {
            let ru = self.rule_1d(chart.u, chart.periodic_u);
            let rv = self.rule_1d(chart.v, chart.periodic_v);
            for (u, wu) in ru.nodes.iter().zip(&ru.weights) {
                for (v, wv) in rv.nodes.iter().zip(&rv.weights) {
                    out.push(QuadNode { chart: c, u: *u, v: *v, weight: wu * wv });
                }
            }
        }
        out
    }
}

/// Gauss-map samples at every quadrature node, evaluated once and reused.
#[derive(Clone, Debug)]
pub struct SampledSurface {
    pub surface: ParamSurface,
    pub rule: QuadratureRule,
    pub weights: Vec<f64>,
    pub samples: Vec<GaussMapSample>,
}

impl SampledSurface {
    pub fn new(surface: &ParamSurface, rule: QuadratureRule) -> Result<Self, GeometryError> {
        let nodes = rule.nodes(surface);
        let samples = nodes
            .iter()
            .map(|n| surface.gauss_map(n.chart, n.u, n.v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            surface: surface.clone(),
            rule,
            weights: nodes.iter().map(|n| n.weight).collect(),
            samples,
        })
    }

    /// `Σ w · F(sample)` with pairwise summation.
    pub fn integrate(&self, mut integrand: impl FnMut(&GaussMapSample) -> f64) -> f64 {
        let terms: Vec<f64> =
            self.samples.iter().zip(&self.weights).map(|(s, w)| w * integrand(s)).collect();
        pairwise_sum(&terms)
    }

    pub fn max_unit_defect(&self) -> f64 {
        self.samples.iter().map(GaussMapSample::unit_defect).fold(0.0, f64::max)
    }
}

/// Which component leads in `∬ first d(second) d(third)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentOrder {
    #[serde(rename = "fgh")]
    Fgh,
    #[serde(rename = "ghf")]
    Ghf,
    #[serde(rename = "hfg")]
    Hfg,
}

impl ComponentOrder {
    pub const ALL: [ComponentOrder; 3] = [ComponentOrder::Fgh, ComponentOrder::Ghf, ComponentOrder::Hfg];

    fn indices(self) -> [usize; 3] {
        match self {
            ComponentOrder::Fgh => [0, 1, 2],
            ComponentOrder::Ghf => [1, 2, 0],
            ComponentOrder::Hfg => [2, 0, 1],
        }
    }
}

/// `∬ K dS` via `det[N, N_u, N_v]`.
pub fn integrate_curvature(surface: &ParamSurface, rule: QuadratureRule) -> Result<f64, GeometryError> {
    Ok(SampledSurface::new(surface, rule)?.integrate(GaussMapSample::curvature_density))
}

pub fn integrate_fdgdh_sampled(sampled: &SampledSurface, order: ComponentOrder) -> f64 {
    let [i, j, k] = order.indices();
    sampled.integrate(|s| s.normal[i].val * s.normal[j].wedge(s.normal[k]))
}

pub fn integrate_fdgdh(
    surface: &ParamSurface,
    order: ComponentOrder,
    rule: QuadratureRule,
) -> Result<f64, GeometryError> {
    Ok(integrate_fdgdh_sampled(&SampledSurface::new(surface, rule)?, order))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussBonnetReport {
    pub surface: String,
    pub resolution: usize,
    pub euler_characteristic: i32,
    pub total_curvature: f64,
    pub expected: f64,
    pub residual: f64,
    /// `∬ f dg dh` for the orderings fgh, ghf, hfg.
    pub fdgdh: [f64; 3],
    pub max_ordering_deviation: f64,
    /// `|∬K − 3∬ f dg dh|`.
    pub curvature_identity_residual: f64,
    pub max_unit_defect: f64,
    pub normalization: String,
}

pub fn gauss_bonnet_check(surface: &ParamSurface, rule: QuadratureRule) -> Result<GaussBonnetReport, GeometryError> {
    let sampled = SampledSurface::new(surface, rule)?;
    let total = sampled.integrate(GaussMapSample::curvature_density);
    let fdgdh = ComponentOrder::ALL.map(|o| integrate_fdgdh_sampled(&sampled, o));
    let mut dev: f64 = 0.0;
    for a in 0..3 {
        for b in a + 1..3 {
            dev = dev.max((fdgdh[a] - fdgdh[b]).abs());
        }
    }
    let expected = surface.expected_total_curvature();
    Ok(GaussBonnetReport {
        surface: surface.kind.to_string(),
        resolution: rule.resolution,
        euler_characteristic: surface.euler_characteristic,
        total_curvature: total,
        expected,
        residual: (total - expected).abs(),
        fdgdh,
        max_ordering_deviation: dev,
        curvature_identity_residual: (total - 3.0 * fdgdh[0]).abs(),
        max_unit_defect: sampled.max_unit_defect(),
        normalization: "total curvature is compared with 2*pi*chi (the bare identity without the 2*pi factor does not hold)".into(),
    })
}

/// One row of integrand data for plotting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrandSample {
    pub chart: usize,
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `det[N, N_u, N_v]`.
    pub density: f64,
    /// Gaussian curvature `K = density / |r_u × r_v|`.
    pub curvature: f64,
}

pub fn integrand_samples(surface: &ParamSurface, rule: QuadratureRule) -> Result<Vec<IntegrandSample>, GeometryError> {
    let sampled = SampledSurface::new(surface, rule)?;
    Ok(sampled
        .samples
        .iter()
        .map(|s| {
            let density = s.curvature_density();
            IntegrandSample {
                chart: s.chart,
                u: s.u,
                v: s.v,
                x: s.position[0].val,
                y: s.position[1].val,
                z: s.position[2].val,
                density,
                curvature: density / s.area,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(n: usize) -> QuadratureRule {
        QuadratureRule::new(n).unwrap()
    }

    #[test]
    fn declared_euler_characteristics() {
        assert_eq!(ParamSurface::sphere().euler_characteristic, 2);
        assert_eq!(ParamSurface::torus(2.0, 1.0).unwrap().euler_characteristic, 0);
        assert_eq!(ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap().euler_characteristic, 2);
    }

    #[test]
    fn zero_bump_is_the_sphere() {
        let s = ParamSurface::sphere();
        let b = ParamSurface::bumped_sphere(0.0, 3).unwrap();
        for (u, v) in [(0.3, 0.1), (1.2, 4.0), (2.9, 6.0)] {
            assert_eq!(s.point_jet(u, v), b.point_jet(u, v));
        }
    }

    #[test]
    fn parameter_violations() {
        assert!(ParamSurface::torus(1.0, 2.0).is_err());
        assert!(ParamSurface::ellipsoid(1.0, 0.0, 1.0).is_err());
        assert!(ParamSurface::bumped_sphere(0.5, 1).is_err());
        assert!(QuadratureRule::new(3).is_err());
    }

    #[test]
    fn parses_surface_names() {
        assert_eq!("sphere".parse::<ParamSurface>().unwrap(), ParamSurface::sphere());
        assert_eq!("torus( 3, 1 )".parse::<ParamSurface>().unwrap().kind, SurfaceKind::Torus { major: 3.0, minor: 1.0 });
        assert_eq!("torus".parse::<ParamSurface>().unwrap().kind, SurfaceKind::Torus { major: 2.0, minor: 1.0 });
        assert!("bumped_sphere(0.1,1)".parse::<ParamSurface>().is_ok());
        assert!("bumped_sphere(0.1,1.5)".parse::<ParamSurface>().is_err());
        assert!("cube".parse::<ParamSurface>().is_err());
        assert!("ellipsoid(1,2)".parse::<ParamSurface>().is_err());
    }

    #[test]
    fn sphere_normal_is_position() {
        let s = ParamSurface::sphere();
        let g = s.gauss_map(0, 0.7, 2.1).unwrap();
        for i in 0..3 {
            assert!((g.normal[i].val - g.position[i].val).abs() < 1e-15);
            assert!((g.normal[i].du - g.position[i].du).abs() < 1e-14);
            assert!((g.normal[i].dv - g.position[i].dv).abs() < 1e-14);
        }
    }

    #[test]
    fn torus_outer_equator_normal() {
        let t = ParamSurface::torus(2.0, 1.0).unwrap();
        for u in [0.0, 1.0, 2.5] {
            let g = t.gauss_map(0, u, 0.0).unwrap();
            assert!((g.normal[0].val - u.cos()).abs() < 1e-15);
            assert!((g.normal[1].val - u.sin()).abs() < 1e-15);
            assert!(g.normal[2].val.abs() < 1e-15);
        }
    }

    #[test]
    fn ellipsoid_near_pole_normal() {
        let e = ParamSurface::ellipsoid(1.0, 1.0, 2.0).unwrap();
        let g = e.gauss_map(0, 1e-6, 0.4).unwrap();
        assert!((g.normal[2].val - 1.0).abs() < 1e-11);
    }

    #[test]
    fn pole_is_degenerate() {
        let err = ParamSurface::sphere().gauss_map(0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateNode { .. }));
    }

    #[test]
    fn normal_partials_match_finite_differences() {
        let s = ParamSurface::bumped_sphere(0.2, 2).unwrap().rotated([1.0, 2.0, 0.5], 0.7);
        let (u, v, h) = (1.1, 0.8, 1e-6);
        let g = s.gauss_map(0, u, v).unwrap();
        let p = s.gauss_map(0, u + h, v).unwrap();
        let m = s.gauss_map(0, u - h, v).unwrap();
        let q = s.gauss_map(0, u, v + h).unwrap();
        let r = s.gauss_map(0, u, v - h).unwrap();
        for i in 0..3 {
            let fu = (p.normal[i].val - m.normal[i].val) / (2.0 * h);
            let fv = (q.normal[i].val - r.normal[i].val) / (2.0 * h);
            assert!((fu - g.normal[i].du).abs() < 1e-8);
            assert!((fv - g.normal[i].dv).abs() < 1e-8);
        }
    }

    #[test]
    fn rotation_preserves_total_curvature() {
        let s = ParamSurface::ellipsoid(1.0, 1.5, 2.0).unwrap().rotated([0.0, 1.0, 1.0], 1.3);
        let k = integrate_curvature(&s, rule(64)).unwrap();
        assert!((k - 4.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn report_carries_normalization() {
        let r = gauss_bonnet_check(&ParamSurface::sphere(), rule(16)).unwrap();
        assert_eq!(r.expected, 4.0 * PI);
        assert!(r.normalization.contains("2*pi*chi"));
    }
}
