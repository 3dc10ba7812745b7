//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers or strings and returns a JSON string. The
//! `*_json` functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use opgeom::algebra::WeylOp;
use opgeom::cocycle::{stability_check, CurveFamily, ProjectionCurve};
use opgeom::flow::{find_limit_cycles, integrate_orbit, FlowField, ScanOptions, Stability, TimeDirection};
use opgeom::geometry::QuadratureRule;
use opgeom::spectral::{conjugate, ellipticity_report, principal_symbol, quadratic_field, Region};

#[derive(Serialize)]
struct SeriesPoint {
    t: f64,
    re: f64,
    im: f64,
    curvature: f64,
}

#[derive(Serialize)]
struct Series {
    points: Vec<SeriesPoint>,
    max_tau_deviation: f64,
    max_curvature_deviation: f64,
    verdict: String,
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// `τ₂(E(t), E(t), E(t))` and `∬K` along the bumped-sphere curve.
pub fn stability_series_json(k: u32, t_max: f64, samples: usize, resolution: usize) -> Result<String, String> {
    let curve = ProjectionCurve::new(CurveFamily::BumpedSphere { k }, t_max, samples).map_err(|e| e.to_string())?;
    let rule = QuadratureRule::new(resolution).map_err(|e| e.to_string())?;
    let r = stability_check(&curve, rule).map_err(|e| e.to_string())?;
    Ok(to_json(&Series {
        points: r
            .samples
            .iter()
            .map(|s| SeriesPoint { t: s.t, re: s.tau2[0], im: s.tau2[1], curvature: s.total_curvature })
            .collect(),
        max_tau_deviation: r.max_tau_deviation,
        max_curvature_deviation: r.max_curvature_deviation,
        verdict: r.verdict.to_string(),
    }))
}

#[derive(Serialize)]
struct Cycle {
    radius: f64,
    period: f64,
    stability: Stability,
    /// One period, thinned to at most 400 points.
    orbit: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct Cycles {
    field: String,
    section_angle: f64,
    isolated_count: usize,
    continuum: bool,
    cycles: Vec<Cycle>,
    /// `(r, P(r) − r)` for samples that returned with a finite displacement.
    displacement: Vec<[f64; 2]>,
}

fn thin(points: Vec<[f64; 2]>, max: usize) -> Vec<[f64; 2]> {
    let stride = points.len().div_ceil(max).max(1);
    let last = *points.last().expect("nonempty orbit");
    let mut out: Vec<[f64; 2]> = points.into_iter().step_by(stride).collect();
    out.push(last);
    out
}

/// Limit cycles of `(P, Q)` on `r ∈ [r_min, r_max]`, with their orbits.
pub fn limit_cycles_json(p: &str, q: &str, r_min: f64, r_max: f64, samples: usize) -> Result<String, String> {
    let field = FlowField::parse(format!("({p}, {q})"), p, q).map_err(|e| e.to_string())?;
    let opts = ScanOptions { range: (r_min, r_max), samples, ..Default::default() };
    let scan = find_limit_cycles(&field, &opts).map_err(|e| e.to_string())?;
    let mut cycles = Vec::new();
    for c in &scan.cycles {
        let orbit = match c.stability {
            Stability::Continuum => Vec::new(),
            _ => {
                // Repelling cycles are only traced accurately in backward time.
                let t = if c.refined_with == TimeDirection::Backward { -c.period } else { c.period };
                let tr = integrate_orbit(&field, scan.section.point(c.radius), t, opts.tol).map_err(|e| e.to_string())?;
                thin(tr.points, 400)
            }
        };
        cycles.push(Cycle { radius: c.radius, period: c.period, stability: c.stability, orbit });
    }
    Ok(to_json(&Cycles {
        field: scan.field.clone(),
        section_angle: scan.section.angle,
        isolated_count: scan.isolated_count,
        continuum: scan.continuum,
        cycles,
        displacement: scan.samples.iter().filter_map(|s| s.delta.filter(|d| d.is_finite()).map(|d| [s.radius, d])).collect(),
    }))
}

#[derive(Serialize)]
struct Cell {
    x: f64,
    y: f64,
    discriminant: f64,
    verdict: String,
}

#[derive(Serialize)]
struct Grid {
    field: String,
    conjugate: String,
    discriminant: String,
    cells: Vec<Cell>,
}

/// Ellipticity of the conjugated quadratic field
/// `P = ax² + bxy + cy²`, `Q = dx² + exy + fy²` on `[-w, w]²`.
pub fn ellipticity_grid_json(coefficients: &[i64], half_width: i64, grid: usize) -> Result<String, String> {
    let c: [i64; 6] = coefficients.try_into().map_err(|_| format!("expected 6 coefficients, got {}", coefficients.len()))?;
    if half_width <= 0 {
        return Err("half width must be positive".into());
    }
    let (p, q) = quadratic_field(c);
    let field = WeylOp::from_field(&p, &q);
    let op = conjugate(&field);
    let symbol = principal_symbol(&op).map_err(|e| e.to_string())?;
    let r = ellipticity_report(&symbol, &Region::symmetric(half_width), grid).map_err(|e| e.to_string())?;
    Ok(to_json(&Grid {
        field: field.to_string(),
        conjugate: op.to_string(),
        discriminant: r.discriminant.clone(),
        cells: r
            .samples
            .iter()
            .map(|g| Cell {
                x: g.x_f64,
                y: g.y_f64,
                discriminant: g.discriminant_f64,
                verdict: serde_json::to_value(g.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
            })
            .collect(),
    }))
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn stability_series(k: u32, t_max: f64, samples: usize, resolution: usize) -> Result<String, JsValue> {
    js(stability_series_json(k, t_max, samples, resolution))
}

#[wasm_bindgen]
pub fn limit_cycles(p: &str, q: &str, r_min: f64, r_max: f64, samples: usize) -> Result<String, JsValue> {
    js(limit_cycles_json(p, q, r_min, r_max, samples))
}

#[wasm_bindgen]
pub fn ellipticity_grid(coefficients: &[i32], half_width: i32, grid: usize) -> Result<String, JsValue> {
    let c: Vec<i64> = coefficients.iter().map(|&x| x.into()).collect();
    js(ellipticity_grid_json(&c, half_width.into(), grid))
}
