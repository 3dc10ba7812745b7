//! CSV plot data. Every file starts with a header row and uses `\n` line
//! endings.
//!
//! | series              | columns                                   |
//! |---------------------|-------------------------------------------|
//! | stability           | `t, re(tau), im(tau)`                     |
//! | ellipticity grid    | `x, y, discriminant, verdict`             |
//! | trajectory          | `t, x, y`                                 |
//! | curvature integrand | `chart, u, v, x, y, z, density, curvature` |

use std::path::Path;

use csv::{Terminator, Writer, WriterBuilder};

use opgeom::cocycle::StabilitySample;
use opgeom::flow::Trajectory;
use opgeom::geometry::IntegrandSample;
use opgeom::spectral::GridSample;

use crate::error::CliError;

pub const STABILITY_HEADER: [&str; 3] = ["t", "re(tau)", "im(tau)"];
pub const ELLIPTICITY_HEADER: [&str; 4] = ["x", "y", "discriminant", "verdict"];
pub const TRAJECTORY_HEADER: [&str; 3] = ["t", "x", "y"];
pub const INTEGRAND_HEADER: [&str; 8] = ["chart", "u", "v", "x", "y", "z", "density", "curvature"];

fn writer(path: &Path, header: &[&str]) -> Result<Writer<std::fs::File>, CliError> {
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    w.write_record(header)?;
    Ok(w)
}

fn finish(mut w: Writer<std::fs::File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn row<const N: usize>(values: [f64; N]) -> [String; N] {
    values.map(|v| v.to_string())
}

pub fn stability_csv(path: &Path, samples: &[StabilitySample]) -> Result<(), CliError> {
    let mut w = writer(path, &STABILITY_HEADER)?;
    for s in samples {
        w.write_record(row([s.t, s.tau2[0], s.tau2[1]]))?;
    }
    finish(w, path)
}

pub fn ellipticity_csv(path: &Path, samples: &[GridSample]) -> Result<(), CliError> {
    let mut w = writer(path, &ELLIPTICITY_HEADER)?;
    for g in samples {
        let verdict = serde_json::to_value(g.verdict).expect("verdict serializes");
        let [x, y, d] = row([g.x_f64, g.y_f64, g.discriminant_f64]);
        w.write_record([x, y, d, verdict.as_str().unwrap_or_default().to_string()])?;
    }
    finish(w, path)
}

pub fn trajectory_csv(path: &Path, tr: &Trajectory) -> Result<(), CliError> {
    let mut w = writer(path, &TRAJECTORY_HEADER)?;
    for (t, [x, y]) in tr.t.iter().zip(&tr.points) {
        w.write_record(row([*t, *x, *y]))?;
    }
    finish(w, path)
}

pub fn integrand_csv(path: &Path, samples: &[IntegrandSample]) -> Result<(), CliError> {
    let mut w = writer(path, &INTEGRAND_HEADER)?;
    for s in samples {
        let mut r = vec![s.chart.to_string()];
        r.extend(row([s.u, s.v, s.x, s.y, s.z, s.density, s.curvature]));
        w.write_record(r)?;
    }
    finish(w, path)
}
