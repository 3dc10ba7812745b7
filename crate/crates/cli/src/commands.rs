use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use opgeom::algebra::{parse_poly, GaussianRational, Monomial, WeylOp};
use opgeom::cocycle::{
    bott_projection, commutator_structure_check, identity_residuals, lambda_estimate, literal_bott_form,
    projection_defect, stability_check, symbolic_lambda, CocycleError, CurveFamily, ProjectionCurve,
};
use opgeom::corank::corank_ladder;
use opgeom::flow::{bound_compare, find_limit_cycles, integrate_orbit, ScanOptions, Stability, TimeDirection};
use opgeom::geometry::{gauss_bonnet_check, integrand_samples, ParamSurface, QuadratureRule, SampledSurface};
use opgeom::spectral::{
    classify_at, conjugate, ellipticity_report, principal_symbol, quadratic_field, Region,
};
use opgeom::Verdict;

use crate::config::*;
use crate::error::CliError;
use crate::plot;

/// What a subcommand hands back before metadata is attached.
pub struct Outcome {
    pub config: Value,
    pub result: Value,
    pub verdict: Option<Verdict>,
    /// Replaces the JSON report on stdout when set.
    pub plain: Option<String>,
}

fn outcome(config: &impl Serialize, result: &impl Serialize, verdict: Option<Verdict>) -> Outcome {
    Outcome {
        config: serde_json::to_value(config).expect("config serializes"),
        result: serde_json::to_value(result).expect("result serializes"),
        verdict,
        plain: None,
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn surface(name: &str) -> Result<ParamSurface, CliError> {
    Ok(name.parse::<ParamSurface>()?)
}

fn rule(n: usize) -> Result<QuadratureRule, CliError> {
    Ok(QuadratureRule::new(n)?)
}

/// Largest accepted spread between the three orderings of `∬ f dg dh`.
const ORDERING_TOL: f64 = 1e-8;

pub fn gauss_bonnet(p: GaussBonnetParams) -> Result<Outcome, CliError> {
    let s = surface(p.surface.as_deref().unwrap())?;
    let r = rule(p.resolution.unwrap())?;
    let tol = p.tolerance.unwrap();
    let report = gauss_bonnet_check(&s, r)?;
    if let Some(path) = &p.csv {
        plot::integrand_csv(path, &integrand_samples(&s, r)?)?;
    }
    let ok = report.residual < tol
        && report.max_ordering_deviation < ORDERING_TOL
        && report.curvature_identity_residual < tol;
    Ok(outcome(&p, &report, Some(pass_if(ok))))
}

const CORRECTED_DEFECT_TOL: f64 = 1e-12;
const LITERAL_DEFECT_FLOOR: f64 = 0.1;
const LAMBDA_TOL: f64 = 1e-6;

pub fn cocycle_check(p: CocycleParams) -> Result<Outcome, CliError> {
    let s = surface(p.surface.as_deref().unwrap())?;
    let r = rule(p.resolution.unwrap())?;
    let identities = identity_residuals(&s, r, p.trials.unwrap(), p.seed.unwrap())?;
    let shared = Arc::new(s.clone());
    let sampled = SampledSurface::new(&s, r)?;
    let corrected = projection_defect(&bott_projection(shared.clone()), &sampled);
    let literal = projection_defect(&literal_bott_form(shared), &sampled);
    let symbolic = symbolic_lambda();
    let (lambda, lambda_error, lambda_note) = match lambda_estimate(&s, r) {
        Ok(est) => {
            let err = (est.lambda[0] - symbolic.lambda_f64[0]).hypot(est.lambda[1] - symbolic.lambda_f64[1]);
            (Some(est), Some(err), None)
        }
        Err(e @ CocycleError::DegenerateDenominator(_)) => (None, None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let ok = identities.verdict == Verdict::Pass
        && corrected < CORRECTED_DEFECT_TOL
        && literal > LITERAL_DEFECT_FLOOR
        && lambda_error.is_none_or(|e| e < LAMBDA_TOL);
    let result = json!({
        "surface": s.kind.to_string(),
        "identities": identities,
        "projection_defect": corrected,
        "literal_form_defect": literal,
        "lambda": lambda,
        "lambda_error": lambda_error,
        "lambda_note": lambda_note,
        "symbolic_lambda": symbolic,
    });
    Ok(outcome(&p, &result, Some(pass_if(ok))))
}

fn curve_family(p: &StabilityParams) -> Result<CurveFamily, CliError> {
    let k = p.k.unwrap();
    Ok(match p.family.as_deref().unwrap() {
        "bumped_sphere" => CurveFamily::BumpedSphere { k },
        "rotated_sphere" => {
            let a = p.axis.as_deref().unwrap();
            CurveFamily::RotatedSphere { axis: [a[0], a[1], a[2]], speed: p.speed.unwrap() }
        }
        "constant" => CurveFamily::Constant,
        "corrupted" => CurveFamily::Corrupted { k, amount: p.amount.unwrap() },
        other => {
            return Err(CliError::Config(format!(
                "`family`: unknown curve `{other}` (expected bumped_sphere, rotated_sphere, constant or corrupted)"
            )))
        }
    })
}

pub fn deform_stability(p: StabilityParams) -> Result<Outcome, CliError> {
    let curve = ProjectionCurve::new(curve_family(&p)?, p.t_max.unwrap(), p.samples.unwrap())?;
    let stability = stability_check(&curve, rule(p.resolution.unwrap())?)?;
    let commutator = commutator_structure_check(
        &curve,
        p.commutator_t0.unwrap(),
        p.commutator_dt.unwrap(),
        rule(p.commutator_resolution.unwrap())?,
    )?;
    if let Some(path) = &p.csv {
        plot::stability_csv(path, &stability.samples)?;
    }
    let ok = stability.verdict == Verdict::Pass && commutator.verdict == Verdict::Pass;
    let result = json!({ "stability": stability, "commutator": commutator });
    Ok(outcome(&p, &result, Some(pass_if(ok))))
}

/// The operator named by `operator`, or built from a field.
fn operator_or_field(
    operator: &Option<String>,
    field: &Option<FieldArg>,
    p: &Option<String>,
    q: &Option<String>,
) -> Result<WeylOp, CliError> {
    match operator {
        Some(_) if field.is_some() || p.is_some() || q.is_some() => {
            Err(CliError::Config("give either `operator` or a field, not both".into()))
        }
        Some(text) => parse_operator("operator", text),
        None => Ok(resolve_field(field, p, q)?.operator()),
    }
}

pub fn corank(p: CorankParams) -> Result<Outcome, CliError> {
    let op = operator_or_field(&p.operator, &p.field, &p.p, &p.q)?;
    let ladder = corank_ladder(&op, p.m_max.unwrap(), p.d_max.unwrap())?;
    Ok(outcome(&p, &ladder, None))
}

pub fn conjugate_cmd(p: ConjugateParams) -> Result<Outcome, CliError> {
    let op = operator_or_field(&p.operator, &p.field, &p.p, &p.q)?;
    let c = conjugate(&op);
    let (symbol, symbol_note) = match principal_symbol(&c) {
        Ok(s) => (Some(s.to_string()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let result = json!({
        "operator": op.to_string(),
        "conjugate": c.to_string(),
        "order": c.order(),
        "coefficient_degree": c.coefficient_degree(),
        "principal_symbol": symbol,
        "principal_symbol_note": symbol_note,
        "parity": conjugate(&c) == op.parity(),
    });
    let mut out = outcome(&p, &result, None);
    if p.plain == Some(true) {
        out.plain = Some(c.to_string());
    }
    Ok(out)
}

fn exact_point(text: &str) -> Result<(GaussianRational, GaussianRational), CliError> {
    let bad = |why: String| CliError::Config(format!("`points`: `{text}`: {why}"));
    let (x, y) = text.split_once(',').ok_or_else(|| bad("expected `x,y`".into()))?;
    let scalar = |s: &str| {
        let p = parse_poly(s).map_err(|e| bad(e.to_string()))?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(bad(format!("`{s}` is not a number")));
        }
        Ok(p.coeff(Monomial::new(0, 0)))
    };
    Ok((scalar(x)?, scalar(y)?))
}

pub fn ellipticity(p: EllipticityParams) -> Result<Outcome, CliError> {
    let (source, op) = match (&p.coefficients, &p.operator) {
        (Some(c), None) => {
            let (fp, fq) = quadratic_field([c[0], c[1], c[2], c[3], c[4], c[5]]);
            let field = WeylOp::from_field(&fp, &fq);
            (Some(field.to_string()), conjugate(&field))
        }
        (None, Some(text)) => (None, parse_operator("operator", text)?),
        _ => unreachable!("resolve() admits exactly one source"),
    };
    let symbol = principal_symbol(&op)?;
    let half_width = p.half_width.unwrap();
    let report = ellipticity_report(&symbol, &Region::symmetric(half_width), p.grid.unwrap())?;
    let mut points = Vec::new();
    for text in p.points.as_deref().unwrap() {
        let (x, y) = exact_point(text)?;
        points.push(json!({ "x": x.to_string(), "y": y.to_string(), "verdict": classify_at(&symbol, &x, &y)? }));
    }
    if let Some(path) = &p.csv {
        plot::ellipticity_csv(path, &report.samples)?;
    }
    let result = json!({
        "field": source,
        "operator": op.to_string(),
        "report": report,
        "points": points,
    });
    Ok(outcome(&p, &result, None))
}

fn scan_options(scan: (f64, f64), samples: usize, tol: f64, t_max: f64, section_angle: f64) -> ScanOptions {
    ScanOptions { range: scan, samples, tol, t_max, section_angle }
}

pub fn limit_cycles(p: CycleParams) -> Result<Outcome, CliError> {
    let field = resolve_field(&p.field, &p.p, &p.q)?;
    let opts = scan_options(p.scan.unwrap(), p.samples.unwrap(), p.tol.unwrap(), p.t_max.unwrap(), p.section_angle.unwrap());
    let scan = find_limit_cycles(&field, &opts)?;
    if let Some(path) = &p.csv {
        let (start, duration) = match scan.cycles.iter().find(|c| c.stability != Stability::Continuum) {
            Some(c) if c.refined_with == TimeDirection::Backward => (scan.section.point(c.radius), -c.period),
            Some(c) => (scan.section.point(c.radius), c.period),
            None => (scan.section.point(opts.range.0), p.trajectory_time.unwrap()),
        };
        let tr = integrate_orbit(&field, start, duration, opts.tol)?;
        plot::trajectory_csv(path, &tr)?;
    }
    Ok(outcome(&p, &scan, None))
}

pub fn bound_compare_cmd(p: BoundParams) -> Result<Outcome, CliError> {
    let field = resolve_field(&p.field, &p.p, &p.q)?;
    let opts = scan_options(p.scan.unwrap(), p.samples.unwrap(), p.tol.unwrap(), p.t_max.unwrap(), 0.0);
    let report = bound_compare(&field, &opts, p.m_max.unwrap(), p.d_max.unwrap())?;
    let verdict = report.verdict;
    Ok(outcome(&p, &report, Some(verdict)))
}
