//! End-to-end acceptance run. Every check goes through the command-line
//! front end where it exposes the quantity; the rest calls the library.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use opgeom::algebra::{parse_poly, GaussianRational, WeylOp};
use opgeom::spectral::{conjugate, conjugation_is_homomorphism_check, SymbolPoly};
use opgeom_cli::{execute, Output, Report};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn cli(args: &[&str]) -> Result<(Report, Duration), String> {
    let start = Instant::now();
    let argv = std::iter::once("opgeom").chain(args.iter().copied());
    match execute(argv) {
        Ok(Output::Report(r)) => Ok((*r, start.elapsed())),
        Ok(Output::Text { text, .. }) => Err(format!("unexpected text output: {text}")),
        Err(e) => Err(format!("{args:?}: {e}")),
    }
}

fn num(v: &Value, path: &str) -> Result<f64, String> {
    v.pointer(path).and_then(Value::as_f64).ok_or_else(|| format!("missing number {path}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gauss_bonnet() -> Check {
    let mut notes = Vec::new();
    for (surface, res, target) in [("sphere", "64", 4.0), ("torus(2,1)", "64", 0.0), ("ellipsoid(1,1,2)", "96", 4.0)] {
        let (r, took) = cli(&["gauss-bonnet", "--surface", surface, "--resolution", res])?;
        let total = num(&r.result, "/total_curvature")?;
        let err = (total - target * std::f64::consts::PI).abs();
        ensure(err < 1e-6, || format!("{surface}: |total - {target}pi| = {err:e}"))?;
        ensure(took < Duration::from_secs(5), || format!("{surface}: {took:?}"))?;
        notes.push(format!("{surface} {err:.1e} in {:.2}s", took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn stokes() -> Check {
    let mut notes = Vec::new();
    for surface in ["sphere", "torus(2,1)"] {
        let (r, _) = cli(&["gauss-bonnet", "--surface", surface, "--resolution", "64"])?;
        let dev = num(&r.result, "/max_ordering_deviation")?;
        let ident = num(&r.result, "/curvature_identity_residual")?;
        ensure(dev < 1e-8, || format!("{surface}: ordering spread {dev:e}"))?;
        ensure(ident < 1e-6, || format!("{surface}: curvature identity {ident:e}"))?;
        notes.push(format!("{surface} spread {dev:.1e} identity {ident:.1e}"));
    }
    Ok(notes.join(", "))
}

fn cocycle_identities() -> Check {
    let mut notes = Vec::new();
    for surface in ["sphere", "torus(2,1)"] {
        let (r, _) = cli(&["cocycle-check", "--surface", surface, "--resolution", "64", "--trials", "50"])?;
        let id = &r.result["identities"];
        let floor = num(id, "/noise_floor")?;
        for key in ["cyclic", "hochschild", "matrix_cyclic", "matrix_hochschild"] {
            let coarse = num(id, &format!("/levels/0/{key}"))?;
            let fine = num(id, &format!("/levels/1/{key}"))?;
            ensure(fine < 1e-8, || format!("{surface} {key}: {fine:e}"))?;
            ensure(fine <= (coarse / 4.0).max(floor), || format!("{surface} {key}: {coarse:e} -> {fine:e}"))?;
        }
        notes.push(format!("{surface} cyclic {:.1e}", num(id, "/levels/1/cyclic")?));
    }
    // Above the rounding floor the residual is truncation error and must shrink.
    let (r, _) = cli(&["cocycle-check", "--surface", "sphere", "--resolution", "16", "--trials", "20"])?;
    let coarse = num(&r.result, "/identities/levels/0/cyclic")?;
    let fine = num(&r.result, "/identities/levels/1/cyclic")?;
    ensure(coarse > 1e-6 && coarse / fine >= 4.0, || format!("resolution 8 -> 16: {coarse:e} -> {fine:e}"))?;
    notes.push(format!("8->16 shrink {:.0}x", coarse / fine));
    Ok(notes.join(", "))
}

fn projection() -> Check {
    let mut worst: f64 = 0.0;
    let mut literal = f64::INFINITY;
    for surface in ["sphere", "torus(2,1)", "ellipsoid(1,1,2)", "bumped_sphere(0.1,1)"] {
        let (r, _) = cli(&["cocycle-check", "--surface", surface, "--trials", "1"])?;
        let d = num(&r.result, "/projection_defect")?;
        ensure(d < 1e-12, || format!("{surface}: defect {d:e}"))?;
        worst = worst.max(d);
        literal = literal.min(num(&r.result, "/literal_form_defect")?);
    }
    ensure(literal > 0.1, || format!("literal form defect only {literal}"))?;
    Ok(format!("corrected <= {worst:.1e}, literal >= {literal:.3}"))
}

fn lambda() -> Check {
    let mut values = Vec::new();
    for surface in ["sphere", "ellipsoid(1,1,2)", "bumped_sphere(0.1,1)"] {
        let (r, _) = cli(&["cocycle-check", "--surface", surface, "--trials", "1"])?;
        let l = [num(&r.result, "/lambda/lambda/0")?, num(&r.result, "/lambda/lambda/1")?];
        let fixture = [num(&r.result, "/symbolic_lambda/lambda_f64/0")?, num(&r.result, "/symbolic_lambda/lambda_f64/1")?];
        ensure(r.result["symbolic_lambda"]["consistent"] == true, || "symbolic ratio not constant".into())?;
        // Hand value of the fixture: λ = −3i/2.
        ensure(fixture == [0.0, -1.5], || format!("fixture {fixture:?}"))?;
        let err = (l[0] - fixture[0]).hypot(l[1] - fixture[1]);
        ensure(err < 1e-6, || format!("{surface}: lambda {l:?} vs fixture, {err:e}"))?;
        values.push(l);
    }
    for a in &values {
        for b in &values {
            let d = (a[0] - b[0]).hypot(a[1] - b[1]);
            ensure(d < 1e-6, || format!("lambda spread {d:e}"))?;
        }
    }
    Ok(format!("lambda = {:.9}{:+.9}i on 3 surfaces", values[0][0], values[0][1]))
}

fn stability() -> Check {
    let (r, took) = cli(&["deform-stability", "--family", "bumped_sphere", "--t-max", "0.2", "--samples", "11", "--resolution", "64"])?;
    let tau = num(&r.result, "/stability/max_tau_deviation")?;
    let k = num(&r.result, "/stability/max_curvature_deviation")?;
    ensure(tau < 1e-6, || format!("tau drift {tau:e}"))?;
    ensure(k < 1e-6, || format!("curvature drift {k:e}"))?;
    ensure(took < Duration::from_secs(60), || format!("{took:?}"))?;
    ensure(r.result["stability"]["samples"].as_array().map(Vec::len) == Some(11), || "sample count".into())?;
    Ok(format!("tau drift {tau:.1e}, curvature drift {k:.1e} in {:.2}s", took.as_secs_f64()))
}

fn commutators() -> Check {
    let (r, _) = cli(&["deform-stability", "--commutator-t0", "0.1", "--commutator-dt", "1e-3", "--samples", "2"])?;
    let c = &r.result["commutator"];
    let mut notes = Vec::new();
    for (key, ratio) in [("idempotent_residual", "idempotent_ratio"), ("commutator_residual", "commutator_ratio")] {
        let res = num(c, &format!("/{key}/0"))?;
        let improve = num(c, &format!("/{ratio}"))?;
        ensure(res < 1e-4, || format!("{key} {res:e}"))?;
        ensure(improve >= 3.5, || format!("{ratio} {improve}"))?;
        notes.push(format!("{key} {res:.1e} (x{improve:.2})"));
    }
    Ok(notes.join(", "))
}

fn coranks() -> Check {
    let (dx, _) = cli(&["corank", "--operator", "dx", "--m-max", "8", "--d-max", "12"])?;
    ensure(dx.result["verdict"] == "corank = 0", || format!("dx: {}", dx.result["verdict"]))?;
    let (e, _) = cli(&["corank", "--field", r#"{"P":"x","Q":"y"}"#, "--m-max", "8", "--d-max", "12"])?;
    ensure(e.result["verdict"] == "corank = 1", || format!("euler: {}", e.result["verdict"]))?;

    let args = ["corank", "--operator", "x*dx", "--m-max", "8", "--d-max", "12"];
    let (a, took) = cli(&args)?;
    ensure(took < Duration::from_secs(10), || format!("{took:?}"))?;
    ensure(a.result["diverging"] == true, || "x*dx not diverging".into())?;
    for entry in a.result["entries"].as_array().ok_or("entries")? {
        let (m, d, codim) = (num(entry, "/m")?, num(entry, "/d")?, num(entry, "/codim")?);
        if d >= m {
            ensure(codim == m + 1.0, || format!("x*dx codim_{m}({d}) = {codim}"))?;
        }
    }
    let (b, _) = cli(&args)?;
    ensure(a.payload_json() == b.payload_json(), || "reports differ between runs".into())?;
    Ok(format!("0 / 1 / diverging, x*dx ladder in {:.2}s", took.as_secs_f64()))
}

/// `i[(ax+dy)ξ² + (bx+ey)ξη + (cx+fy)η²]`, assembled by hand.
fn hand_symbol([a, b, c, d, e, f]: [i64; 6]) -> SymbolPoly {
    let lin = |u: i64, v: i64| parse_poly(&format!("({u}i)*x + ({v}i)*y")).unwrap();
    SymbolPoly::from_terms([(2, 0, lin(a, d)), (1, 1, lin(b, e)), (0, 2, lin(c, f))])
}

fn random_op(rng: &mut impl Rng) -> WeylOp {
    let n = rng.gen_range(1..=3);
    WeylOp::from_terms((0..n).map(|_| {
        let a = rng.gen_range(0..=3);
        let b = rng.gen_range(0..=3 - a);
        let p = rng.gen_range(0..=3);
        let q = rng.gen_range(0..=3 - p);
        let c = GaussianRational::from_parts((rng.gen_range(-5..=5), rng.gen_range(1..=3)), (rng.gen_range(-5..=5), 1));
        (a, b, p, q, c)
    }))
}

fn conjugation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for _ in 0..10 {
        let k: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let p = format!("({})*x^2 + ({})*x*y + ({})*y^2", k[0], k[1], k[2]);
        let q = format!("({})*x^2 + ({})*x*y + ({})*y^2", k[3], k[4], k[5]);
        let (r, _) = cli(&["conjugate", "--p", &p, "--q", &q])?;
        let got = r.result["principal_symbol"].as_str().unwrap_or_default().to_string();
        let expected = hand_symbol(k).to_string();
        ensure(got == expected, || format!("{k:?}: {got} vs {expected}"))?;
        ensure(r.result["parity"] == true, || format!("{k:?}: double conjugation"))?;
    }
    for _ in 0..20 {
        let (a, b) = (random_op(&mut rng), random_op(&mut rng));
        let ok = conjugation_is_homomorphism_check(&a, &b).map_err(|e| e.to_string())?;
        ensure(ok, || format!("homomorphism fails on {a} / {b}"))?;
        ensure(conjugate(&conjugate(&a)) == a.parity(), || format!("parity fails on {a}"))?;
    }
    Ok("10 symbols, 20 homomorphism pairs, parity".into())
}

fn ellipticity() -> Check {
    let (r, _) = cli(&["ellipticity", "--coefficients", "1,0,1,0,0,1", "--point", "1,0", "--point", "0,1"])?;
    let verdicts: Vec<&str> = r.result["points"].as_array().ok_or("points")?.iter().filter_map(|p| p["verdict"].as_str()).collect();
    ensure(verdicts == ["elliptic", "degenerate"], || format!("{verdicts:?}"))?;
    // P = x² + y², Q = y²: A = x, B = 0, C = x + y, so B² − 4AC = −4x² − 4xy.
    let disc = r.result["report"]["discriminant"].as_str().unwrap_or_default();
    ensure(disc == "-4*x^2 - 4*x*y", || format!("discriminant {disc}"))?;
    Ok(format!("(1,0) elliptic, (0,1) degenerate, disc {disc}"))
}

fn limit_cycles() -> Check {
    let limit = Duration::from_secs(30);
    let (v, t1) = cli(&["limit-cycles", "--field", "van_der_pol", "--scan", "0.1:4", "--tol", "1e-9"])?;
    ensure(v.result["isolated_count"] == 1, || format!("vdp count {}", v.result["isolated_count"]))?;
    ensure(v.result["cycles"][0]["stability"] == "stable", || "vdp stability".into())?;

    let (two, t2) = cli(&["limit-cycles", "--field", "two_ring", "--scan", "0.2:3", "--tol", "1e-9"])?;
    ensure(two.result["isolated_count"] == 2, || format!("two_ring count {}", two.result["isolated_count"]))?;
    for (i, (radius, stab)) in [(1.0, "stable"), (2.0, "unstable")].into_iter().enumerate() {
        let c = &two.result["cycles"][i];
        let r = num(c, "/radius")?;
        ensure((r - radius).abs() < 1e-3 && c["stability"] == stab, || format!("two_ring cycle {i}: r = {r}, {}", c["stability"]))?;
    }

    let (c, t3) = cli(&["limit-cycles", "--field", "linear_center", "--scan", "0.5:2", "--tol", "1e-9"])?;
    ensure(c.result["isolated_count"] == 0 && c.result["continuum"] == true, || "center not a continuum".into())?;
    for (name, t) in [("vdp", t1), ("two_ring", t2), ("center", t3)] {
        ensure(t < limit, || format!("{name}: {t:?}"))?;
    }
    Ok(format!(
        "vdp r = {:.7}, two_ring r = {:.6} / {:.6}, center continuum; {:.2}s / {:.2}s / {:.2}s",
        num(&v.result, "/cycles/0/radius")?,
        num(&two.result, "/cycles/0/radius")?,
        num(&two.result, "/cycles/1/radius")?,
        t1.as_secs_f64(),
        t2.as_secs_f64(),
        t3.as_secs_f64()
    ))
}

fn bounds() -> Check {
    let mut notes = Vec::new();
    for (field, allowed) in [("euler", &["CONSISTENT"][..]), ("dx", &["CONSISTENT"]), ("van_der_pol", &["CONSISTENT", "INCONCLUSIVE"])] {
        let (r, _) = cli(&["bound-compare", "--field", field])?;
        let v = r.verdict.map(|v| v.as_str()).unwrap_or("none");
        ensure(allowed.contains(&v), || format!("{field}: {v}"))?;
        notes.push(format!("{field} {v}"));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("gauss-bonnet", gauss_bonnet),
        ("stokes orderings", stokes),
        ("cocycle identities", cocycle_identities),
        ("projection invariants", projection),
        ("lambda universality", lambda),
        ("deformation stability", stability),
        ("commutator structure", commutators),
        ("corank oracles", coranks),
        ("fourier conjugation", conjugation),
        ("ellipticity report", ellipticity),
        ("limit cycles", limit_cycles),
        ("bound comparison", bounds),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
