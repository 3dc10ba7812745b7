//! First-return maps on rays from the origin and limit-cycle search.
//!
//! A scan samples `Δ(r) = P(r) − r` along the section, brackets sign changes
//! and bisects them. Attracting cycles are refined with the forward map.
//! Repelling ones are refined with the backward map, for which they attract;
//! the forward map near a strongly repelling cycle is too expanding to
//! evaluate (for the two-ring field `P′(2) = e^{48π}`).

use serde::Serialize;

use super::integrator::{check_tolerance, dopri_step, Stepper};
use super::{FlowError, FlowField};

/// Increment applied to the section angle when the ray is not transversal.
pub const SECTION_ROTATION: f64 = std::f64::consts::PI / 7.0;
const MAX_ROTATIONS: usize = 12;
/// `|angular component| ≤ TRANSVERSAL_TOL · |F|` counts as tangent.
const TRANSVERSAL_TOL: f64 = 1e-9;
/// `|Δ| < CONTINUUM_FACTOR · tol` on consecutive samples marks a band.
const CONTINUUM_FACTOR: f64 = 1e3;
const CONTINUUM_MIN_SAMPLES: usize = 3;
const SEMI_STABLE_TOL: f64 = 1e-6;
const MERGE_RADIUS: f64 = 1e-4;
const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Section {
    pub angle: f64,
}

impl Section {
    pub fn new(angle: f64) -> Self {
        Self { angle }
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }

    pub fn point(&self, r: f64) -> [f64; 2] {
        let [c, s] = self.direction();
        [r * c, r * s]
    }

    /// Signed distance from the section line.
    fn sigma(&self, y: [f64; 2]) -> f64 {
        let [c, s] = self.direction();
        -s * y[0] + c * y[1]
    }

    fn radial(&self, y: [f64; 2]) -> f64 {
        let [c, s] = self.direction();
        c * y[0] + s * y[1]
    }

    /// Angular component of the field and its magnitude at radius `r`.
    fn angular(&self, field: &FlowField, r: f64) -> (f64, f64) {
        let p = self.point(r);
        let f = field.eval(p[0], p[1]);
        (self.sigma(f), f[0].hypot(f[1]))
    }

    fn is_transversal_at(&self, field: &FlowField, r: f64) -> Option<f64> {
        let (a, speed) = self.angular(field, r);
        (speed > 0.0 && a.abs() > TRANSVERSAL_TOL * speed).then_some(a.signum())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDirection {
    Forward,
    Backward,
}

impl TimeDirection {
    fn sign(self) -> f64 {
        match self {
            TimeDirection::Forward => 1.0,
            TimeDirection::Backward => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReturnOptions {
    pub tol: f64,
    /// Longest integration time before giving up.
    pub t_max: f64,
    pub direction: TimeDirection,
}

impl Default for ReturnOptions {
    fn default() -> Self {
        Self { tol: 1e-9, t_max: 100.0, direction: TimeDirection::Forward }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReturnPoint {
    pub radius: f64,
    pub period: f64,
    pub steps: usize,
}

/// Radius of the next crossing of the ray in the same direction as the flow
/// leaves it at `r`.
pub fn return_map(field: &FlowField, section: Section, r: f64, opts: &ReturnOptions) -> Result<ReturnPoint, FlowError> {
    check_tolerance(opts.tol)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(FlowError::InvalidScan(format!("radius {r} must be positive")));
    }
    let dir = opts.direction.sign();
    let s = dir * section.is_transversal_at(field, r).ok_or(FlowError::NotTransversal { r })?;
    let mut st = Stepper::new(field, section.point(r), opts.tol, dir);
    let mut armed = false;
    loop {
        if st.t.abs() > opts.t_max {
            return Err(FlowError::NoReturn { t_max: opts.t_max });
        }
        let (t0, y0) = (st.t, st.y);
        let h = st.advance(None)?;
        let before = s * section.sigma(y0);
        let after = s * section.sigma(st.y);
        if after < 0.0 {
            armed = true;
            continue;
        }
        if !(armed && before <= 0.0 && after > 0.0) {
            continue;
        }
        let (tau, y) = locate_crossing(field, section, s, y0, h, opts.tol, before, after);
        let radius = section.radial(y);
        if radius > 0.0 {
            return Ok(ReturnPoint { radius, period: (t0 + tau).abs(), steps: st.accepted });
        }
    }
}

/// Illinois regula falsi on the step length, re-stepping from the step start.
#[allow(clippy::too_many_arguments)]
fn locate_crossing(
    field: &FlowField,
    section: Section,
    s: f64,
    y0: [f64; 2],
    h: f64,
    tol: f64,
    mut ga: f64,
    mut gb: f64,
) -> (f64, [f64; 2]) {
    let (mut a, mut b) = (0.0, 1.0);
    let mut side = 0;
    let mut best = (h, dopri_step(field, y0, h, tol).0);
    let scale = 1e-15 * (1.0 + y0[0].hypot(y0[1]));
    for _ in 0..100 {
        let c = (a * gb - b * ga) / (gb - ga);
        let tau = c * h;
        let y = dopri_step(field, y0, tau, tol).0;
        let g = s * section.sigma(y);
        best = (tau, y);
        if g.abs() <= scale || (b - a) < 1e-15 {
            break;
        }
        if g > 0.0 {
            (b, gb) = (c, g);
            if side == 1 {
                ga /= 2.0;
            }
            side = 1;
        } else {
            (a, ga) = (c, g);
            if side == -1 {
                gb /= 2.0;
            }
            side = -1;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanOptions {
    pub range: (f64, f64),
    pub samples: usize,
    pub tol: f64,
    pub t_max: f64,
    /// Initial section angle; rotated by [`SECTION_ROTATION`] if needed.
    pub section_angle: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { range: (0.1, 4.0), samples: 200, tol: 1e-9, t_max: 100.0, section_angle: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum SampleStatus {
    Returned,
    Diverged,
    NoReturn,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSample {
    pub radius: f64,
    pub returned: Option<f64>,
    pub delta: Option<f64>,
    pub status: SampleStatus,
}

impl ScanSample {
    /// Sign-carrying value of `Δ`; escape to infinity counts as `+∞`.
    fn signed(&self) -> Option<f64> {
        match self.status {
            SampleStatus::Returned => self.delta,
            SampleStatus::Diverged => Some(f64::INFINITY),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    SemiStable,
    /// A band of non-isolated closed orbits.
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCycleRecord {
    /// Section crossing radius; the band midpoint for a continuum.
    pub radius: f64,
    pub period: f64,
    pub stability: Stability,
    /// `|P(r) − r|` at the reported radius, for the map used to refine it.
    pub residual: f64,
    /// Derivative of the refining map (`refined_with`) by central differences.
    pub return_derivative: f64,
    pub refined_with: TimeDirection,
    pub band: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleScan {
    pub field: String,
    pub section: Section,
    pub section_rotations: usize,
    pub options: ScanOptions,
    pub samples: Vec<ScanSample>,
    /// Isolated cycles sorted by radius, then continuum bands.
    pub cycles: Vec<LimitCycleRecord>,
    pub isolated_count: usize,
    pub continuum: bool,
    pub failed_samples: usize,
}

fn choose_section(field: &FlowField, opts: &ScanOptions) -> Result<(Section, usize), FlowError> {
    let (a, b) = opts.range;
    let probes = 4 * opts.samples;
    for k in 0..MAX_ROTATIONS {
        let section = Section::new(opts.section_angle + k as f64 * SECTION_ROTATION);
        let mut signs = (0..=probes).map(|i| section.is_transversal_at(field, a + (b - a) * i as f64 / probes as f64));
        let first = signs.next().flatten();
        if first.is_some() && signs.all(|s| s == first) {
            return Ok((section, k));
        }
    }
    Err(FlowError::NoTransversalSection)
}

fn sample(field: &FlowField, section: Section, r: f64, opts: &ReturnOptions) -> ScanSample {
    let (returned, status) = match return_map(field, section, r, opts) {
        Ok(p) => (Some(p.radius), SampleStatus::Returned),
        Err(FlowError::Divergence { .. }) => (None, SampleStatus::Diverged),
        Err(FlowError::NoReturn { .. }) => (None, SampleStatus::NoReturn),
        Err(e) => (None, SampleStatus::Failed(e.to_string())),
    };
    ScanSample { radius: r, returned, delta: returned.map(|p| p - r), status }
}

/// `Δ(r)` for the given direction; divergence counts as `+∞`.
fn delta(field: &FlowField, section: Section, r: f64, opts: &ReturnOptions) -> Option<(f64, f64)> {
    match return_map(field, section, r, opts) {
        Ok(p) => Some((p.radius - r, p.period)),
        Err(FlowError::Divergence { .. }) => Some((f64::INFINITY, f64::NAN)),
        Err(_) => None,
    }
}

fn bisect(
    field: &FlowField,
    section: Section,
    (mut a, mut b): (f64, f64),
    opts: &ReturnOptions,
    width: f64,
) -> Option<f64> {
    let ga = delta(field, section, a, opts)?.0;
    let gb = delta(field, section, b, opts)?.0;
    if (ga >= 0.0) == (gb >= 0.0) {
        return None;
    }
    let positive_left = ga >= 0.0;
    for _ in 0..MAX_BISECTIONS {
        if b - a <= width {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = delta(field, section, m, opts)?.0;
        if (gm >= 0.0) == positive_left {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

fn refine(field: &FlowField, section: Section, bracket: (f64, f64), positive_left: bool, opts: &ScanOptions) -> Option<LimitCycleRecord> {
    let tol = (opts.tol * 1e-2).max(1e-12);
    let width = (0.1 * opts.tol).max(4.0 * f64::EPSILON * bracket.1);
    let preferred = if positive_left { TimeDirection::Forward } else { TimeDirection::Backward };
    let other = match preferred {
        TimeDirection::Forward => TimeDirection::Backward,
        TimeDirection::Backward => TimeDirection::Forward,
    };
    let (r, direction) = [preferred, other].into_iter().find_map(|d| {
        let ro = ReturnOptions { tol, t_max: opts.t_max, direction: d };
        bisect(field, section, bracket, &ro, width).map(|r| (r, d))
    })?;
    let ro = ReturnOptions { tol, t_max: opts.t_max, direction };
    let (residual, period) = delta(field, section, r, &ro)?;
    let m = derivative(field, section, r, &ro)?;
    // The backward map attracts exactly where the forward map repels.
    let contracting = m < 1.0;
    let stability = if (m - 1.0).abs() < SEMI_STABLE_TOL {
        Stability::SemiStable
    } else if contracting == (direction == TimeDirection::Forward) {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Some(LimitCycleRecord {
        radius: r,
        period,
        stability,
        residual: residual.abs(),
        return_derivative: m,
        refined_with: direction,
        band: None,
    })
}

/// Central difference of the return map, one-sided if a side fails.
fn derivative(field: &FlowField, section: Section, r: f64, opts: &ReturnOptions) -> Option<f64> {
    let h = 1e-4 * r.max(1.0);
    let p = |x: f64| return_map(field, section, x, opts).ok().map(|p| p.radius);
    let mid = p(r);
    match (p(r + h), p(r - h)) {
        (Some(hi), Some(lo)) => Some((hi - lo) / (2.0 * h)),
        (Some(hi), None) => Some((hi - mid?) / h),
        (None, Some(lo)) => Some((mid? - lo) / h),
        (None, None) => None,
    }
}

/// Maximal runs of at least [`CONTINUUM_MIN_SAMPLES`] returned samples with
/// `|Δ|` below the continuum threshold.
fn continuum_runs(samples: &[ScanSample], threshold: f64) -> Vec<(usize, usize)> {
    let flat: Vec<bool> = samples
        .iter()
        .map(|s| s.status == SampleStatus::Returned && s.delta.is_some_and(|d| d.abs() < threshold))
        .collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < flat.len() {
        if !flat[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < flat.len() && flat[i] {
            i += 1;
        }
        if i - start >= CONTINUUM_MIN_SAMPLES {
            runs.push((start, i - 1));
        }
    }
    runs
}

/// Scans `Δ(r)` on the section and returns isolated cycles and continuum
/// bands. Per-sample integration failures are recorded, not fatal.
pub fn find_limit_cycles(field: &FlowField, opts: &ScanOptions) -> Result<CycleScan, FlowError> {
    check_tolerance(opts.tol)?;
    let (a, b) = opts.range;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(FlowError::InvalidScan(format!("range [{a}, {b}] must satisfy 0 < r_min < r_max")));
    }
    if opts.samples < 2 {
        return Err(FlowError::InvalidScan("at least 2 samples are required".into()));
    }
    let (section, rotations) = choose_section(field, opts)?;
    let ro = ReturnOptions { tol: opts.tol, t_max: opts.t_max, direction: TimeDirection::Forward };
    let radii: Vec<f64> = (0..opts.samples).map(|i| a + (b - a) * i as f64 / (opts.samples - 1) as f64).collect();
    let samples: Vec<ScanSample> = radii.iter().map(|&r| sample(field, section, r, &ro)).collect();

    let runs = continuum_runs(&samples, CONTINUUM_FACTOR * opts.tol);
    let in_band = |i: usize| runs.iter().any(|&(lo, hi)| (lo..=hi).contains(&i));
    let mut isolated: Vec<LimitCycleRecord> = Vec::new();
    for i in 0..samples.len() - 1 {
        if in_band(i) || in_band(i + 1) {
            continue;
        }
        let (Some(da), Some(db)) = (samples[i].signed(), samples[i + 1].signed()) else {
            continue;
        };
        if (da >= 0.0) == (db >= 0.0) {
            continue;
        }
        if let Some(rec) = refine(field, section, (radii[i], radii[i + 1]), da >= 0.0, opts) {
            isolated.push(rec);
        }
    }
    isolated.sort_by(|x, y| x.radius.total_cmp(&y.radius));
    let mut cycles: Vec<LimitCycleRecord> = Vec::new();
    for rec in isolated {
        match cycles.last_mut() {
            Some(last) if (rec.radius - last.radius).abs() < MERGE_RADIUS => {
                if rec.residual < last.residual {
                    *last = rec;
                }
            }
            _ => cycles.push(rec),
        }
    }
    let isolated_count = cycles.len();
    for &(lo, hi) in &runs {
        let band = &samples[lo..=hi];
        let residual = band.iter().filter_map(|s| s.delta).fold(0.0f64, |m, d| m.max(d.abs()));
        let mid = 0.5 * (radii[lo] + radii[hi]);
        let period = return_map(field, section, mid, &ro).map(|p| p.period).unwrap_or(f64::NAN);
        cycles.push(LimitCycleRecord {
            radius: mid,
            period,
            stability: Stability::Continuum,
            residual,
            return_derivative: 1.0,
            refined_with: TimeDirection::Forward,
            band: Some([radii[lo], radii[hi]]),
        });
    }
    let failed_samples = samples.iter().filter(|s| matches!(s.status, SampleStatus::Failed(_))).count();
    Ok(CycleScan {
        field: field.label.clone(),
        section,
        section_rotations: rotations,
        options: *opts,
        samples,
        continuum: !runs.is_empty(),
        cycles,
        isolated_count,
        failed_samples,
    })
}
