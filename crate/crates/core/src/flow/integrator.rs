//! Dormand-Prince 5(4) with local extrapolation and step-size control.

use serde::Serialize;

use super::{FlowError, FlowField};

/// State norm beyond which an orbit is declared divergent.
pub const BLOW_UP_NORM: f64 = 1e8;
pub const TOL_RANGE: (f64, f64) = (1e-12, 1e-4);
const MAX_STEPS: usize = 2_000_000;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (equal to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub fn check_tolerance(tol: f64) -> Result<(), FlowError> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(FlowError::InvalidTolerance(tol));
    }
    Ok(())
}

/// One trial step: the fifth-order result and the scaled error norm.
pub fn dopri_step(field: &FlowField, y: [f64; 2], h: f64, tol: f64) -> ([f64; 2], f64) {
    let mut k = [[0.0; 2]; 7];
    for s in 0..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        k[s] = field.eval(ys[0], ys[1]);
    }
    let mut y5 = y;
    let mut err = 0.0f64;
    for i in 0..2 {
        let mut d5 = 0.0;
        let mut d4 = 0.0;
        for s in 0..7 {
            d5 += B5[s] * k[s][i];
            d4 += B4[s] * k[s][i];
        }
        y5[i] += h * d5;
        let scale = tol * (1.0 + y[i].abs().max(y5[i].abs()));
        err = err.max((h * (d5 - d4)).abs() / scale);
    }
    (y5, err)
}

/// Adaptive stepping state shared by plain integration and event search.
pub(crate) struct Stepper<'a> {
    pub field: &'a FlowField,
    pub tol: f64,
    pub t: f64,
    pub y: [f64; 2],
    pub h: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(field: &'a FlowField, start: [f64; 2], tol: f64, direction: f64) -> Self {
        let f = field.eval(start[0], start[1]);
        let speed = f[0].hypot(f[1]);
        let size = 1.0 + start[0].hypot(start[1]);
        let h = if speed > 0.0 { (0.01 * size / speed).min(0.1) } else { 0.1 };
        Self { field, tol, t: 0.0, y: start, h: h * direction.signum(), accepted: 0, rejected: 0 }
    }

    /// Takes one accepted step of at most `|h_cap|`, returning the step used.
    pub fn advance(&mut self, h_cap: Option<f64>) -> Result<f64, FlowError> {
        loop {
            if self.accepted + self.rejected > MAX_STEPS {
                return Err(FlowError::StepLimit { t: self.t });
            }
            let capped = h_cap.is_some_and(|cap| self.h.abs() > cap.abs());
            let h = if capped { h_cap.unwrap() } else { self.h };
            if h.abs() < f64::MIN_POSITIVE {
                return Err(FlowError::StepUnderflow { t: self.t });
            }
            let (y5, err) = dopri_step(self.field, self.y, h, self.tol);
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 && y5.iter().all(|v| v.is_finite()) {
                if y5 == self.y && self.t + h == self.t {
                    return Err(FlowError::StepUnderflow { t: self.t });
                }
                self.t += h;
                self.y = y5;
                self.accepted += 1;
                if !capped {
                    self.h = h * factor;
                }
                let norm = y5[0].hypot(y5[1]);
                if norm > BLOW_UP_NORM {
                    return Err(FlowError::Divergence { t: self.t, norm });
                }
                return Ok(h);
            }
            self.rejected += 1;
            self.h = if y5.iter().all(|v| v.is_finite()) { h * factor.min(1.0) } else { h * MIN_FACTOR };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> [f64; 2] {
        *self.points.last().expect("trajectory has its start point")
    }
}

/// Integrates from `start` to `t_max` (negative for backward time).
pub fn integrate_orbit(field: &FlowField, start: [f64; 2], t_max: f64, tol: f64) -> Result<Trajectory, FlowError> {
    check_tolerance(tol)?;
    let direction = if t_max < 0.0 { -1.0 } else { 1.0 };
    let mut s = Stepper::new(field, start, tol, direction);
    let mut t = vec![0.0];
    let mut points = vec![start];
    while (t_max - s.t) * direction > 1e-15 * t_max.abs().max(1.0) {
        s.advance(Some(t_max - s.t))?;
        t.push(s.t);
        points.push(s.y);
    }
    Ok(Trajectory { t, points, accepted_steps: s.accepted, rejected_steps: s.rejected })
}
