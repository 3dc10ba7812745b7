//! Parameter records for each subcommand.
//!
//! Every record can come from flags, from a JSON file given with `--config`,
//! or both (flags win). Unknown keys in the file are rejected. After merging,
//! unset fields are filled with their defaults and the full record is echoed
//! in the report.

use std::path::{Path, PathBuf};

use clap::Args;
use schemars::JsonSchema;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use opgeom::algebra::{parse_poly, parse_weyl, WeylOp};
use opgeom::flow::FlowField;

use crate::error::CliError;

/// An explicit polynomial field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A field given inline, by built-in name, or as a path to a JSON
/// [`FieldSpec`] file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum FieldArg {
    Spec(FieldSpec),
    Name(String),
}

fn parse_field_arg(s: &str) -> Result<FieldArg, String> {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map(FieldArg::Spec).map_err(|e| e.to_string())
    } else {
        Ok(FieldArg::Name(s.to_string()))
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected r_min:r_max, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Resolves the field from `field`, or from `P`/`Q` strings.
pub fn resolve_field(field: &Option<FieldArg>, p: &Option<String>, q: &Option<String>) -> Result<FlowField, CliError> {
    let spec = match (field, p, q) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(CliError::Config("give either `field` or `P`/`Q`, not both".into()))
        }
        (None, Some(p), Some(q)) => FieldSpec { p: p.clone(), q: q.clone(), label: None },
        (None, Some(_), None) | (None, None, Some(_)) => {
            return Err(CliError::Config("`P` and `Q` must be given together".into()))
        }
        (None, None, None) => return Err(CliError::Config("missing key `field` (or `P` and `Q`)".into())),
        (Some(FieldArg::Spec(s)), None, None) => s.clone(),
        (Some(FieldArg::Name(name)), None, None) => match FlowField::builtin(name) {
            Ok(f) => return Ok(f),
            Err(_) if Path::new(name).is_file() => {
                let text = std::fs::read_to_string(name).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))?
            }
            Err(e) => return Err(CliError::Config(e.to_string())),
        },
    };
    let key = if field.is_some() { ["field.P", "field.Q"] } else { ["P", "Q"] };
    let p = parse_poly(&spec.p).map_err(|e| CliError::Config(format!("`{}`: {e}", key[0])))?;
    let q = parse_poly(&spec.q).map_err(|e| CliError::Config(format!("`{}`: {e}", key[1])))?;
    let label = spec.label.clone().unwrap_or_else(|| format!("({}, {})", spec.p, spec.q));
    FlowField::new(label, p, q).map_err(|e| CliError::Config(format!("`field`: {e}")))
}

/// Parses an operator given under the config key `key`.
pub fn parse_operator(key: &str, text: &str) -> Result<WeylOp, CliError> {
    parse_weyl(text).map_err(|e| CliError::Config(format!("`{key}`: {e}")))
}

/// Overlays explicit flags on the file record and deserializes strictly.
pub fn merge<P: Clone + Serialize + DeserializeOwned>(flags: &P, config: Option<&Path>) -> Result<P, CliError> {
    let Some(path) = config else {
        return Ok(flags.clone());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut base: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = &mut base else {
        return Err(CliError::Config(format!("{}: config must be a JSON object", path.display())));
    };
    if let Value::Object(over) = serde_json::to_value(flags).expect("serializable") {
        for (k, v) in over {
            if !v.is_null() {
                map.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn check_tolerance(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{name}` must be positive, got {v}")))
    }
}

fn check_resolution(name: &str, v: usize) -> Result<(), CliError> {
    if v >= 4 {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{name}` must be at least 4, got {v}")))
    }
}

macro_rules! fill {
    ($self:ident, $($field:ident = $value:expr),* $(,)?) => {
        $( if $self.$field.is_none() { $self.$field = Some($value); } )*
    };
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GaussBonnetParams {
    /// `sphere`, `torus(R,r)`, `ellipsoid(a,b,c)` or `bumped_sphere(t,k)`.
    #[arg(long)]
    pub surface: Option<String>,
    /// Nodes per chart direction.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Threshold on the Gauss-Bonnet and curvature-identity residuals.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Integrand samples as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl GaussBonnetParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, surface = "sphere".into(), resolution = 64, tolerance = 1e-6);
        check_resolution("resolution", self.resolution.unwrap())?;
        check_tolerance("tolerance", self.tolerance.unwrap())?;
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CocycleParams {
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Random inputs per identity.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CocycleParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, surface = "sphere".into(), resolution = 64, trials = 50, seed = 7);
        check_resolution("resolution", self.resolution.unwrap())?;
        if self.trials == Some(0) {
            return Err(CliError::Config("`trials` must be at least 1".into()));
        }
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StabilityParams {
    /// `bumped_sphere`, `rotated_sphere`, `constant` or `corrupted`.
    #[arg(long)]
    pub family: Option<String>,
    /// Bump mode for `bumped_sphere` and `corrupted`.
    #[arg(long)]
    pub k: Option<u32>,
    /// Size of the non-projection perturbation for `corrupted`.
    #[arg(long)]
    pub amount: Option<f64>,
    /// Rotation axis for `rotated_sphere`, as `x,y,z`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub axis: Option<Vec<f64>>,
    #[arg(long)]
    pub speed: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Base point of the finite-difference commutator check.
    #[arg(long)]
    pub commutator_t0: Option<f64>,
    #[arg(long)]
    pub commutator_dt: Option<f64>,
    #[arg(long)]
    pub commutator_resolution: Option<usize>,
    /// `t, re(tau), im(tau)` series as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl StabilityParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(
            self,
            family = "bumped_sphere".into(),
            k = 1,
            amount = 0.5,
            axis = vec![1.0, 1.0, 0.0],
            speed = 1.0,
            t_max = 0.2,
            samples = 11,
            resolution = 64,
            commutator_t0 = 0.1,
            commutator_dt = 1e-3,
            commutator_resolution = 16,
        );
        check_resolution("resolution", self.resolution.unwrap())?;
        check_resolution("commutator_resolution", self.commutator_resolution.unwrap())?;
        check_tolerance("commutator_dt", self.commutator_dt.unwrap())?;
        if self.axis.as_ref().is_some_and(|a| a.len() != 3) {
            return Err(CliError::Config("`axis` needs three components".into()));
        }
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CorankParams {
    /// Built-in name, inline `{"P": .., "Q": ..}` or a JSON file.
    #[arg(long, value_parser = parse_field_arg)]
    pub field: Option<FieldArg>,
    #[arg(long = "p", value_name = "POLY")]
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[arg(long = "q", value_name = "POLY")]
    #[serde(rename = "Q")]
    pub q: Option<String>,
    /// Any operator in the text grammar, e.g. `x*dx`, instead of a field.
    #[arg(long)]
    pub operator: Option<String>,
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub d_max: Option<u32>,
}

impl CorankParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, m_max = 6, d_max = 9);
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ConjugateParams {
    /// Operator in the text grammar.
    #[arg(long)]
    pub operator: Option<String>,
    #[arg(long, value_parser = parse_field_arg)]
    pub field: Option<FieldArg>,
    #[arg(long = "p", value_name = "POLY")]
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[arg(long = "q", value_name = "POLY")]
    #[serde(rename = "Q")]
    pub q: Option<String>,
    /// Print only the conjugated operator.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub plain: Option<bool>,
}

impl ConjugateParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, plain = false);
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EllipticityParams {
    /// `a,b,c,d,e,f` of `P = ax² + bxy + cy²`, `Q = dx² + exy + fy²`; the
    /// conjugated field is classified.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Option<Vec<i64>>,
    /// A second-order operator whose own principal symbol is classified.
    #[arg(long)]
    pub operator: Option<String>,
    /// Grid covers `[-w, w]²`.
    #[arg(long)]
    pub half_width: Option<i64>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Extra exact points `x,y` (rationals like `1/2`).
    #[arg(long = "point", value_name = "X,Y", allow_hyphen_values = true)]
    pub points: Option<Vec<String>>,
    /// `x, y, discriminant, verdict` grid as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl EllipticityParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        if self.operator.is_none() {
            fill!(self, coefficients = vec![1, 0, 1, 0, 0, 1]);
        }
        fill!(self, half_width = 2, grid = 5, points = vec!["1,0".into(), "0,1".into()]);
        if self.coefficients.as_ref().is_some_and(|c| c.len() != 6) {
            return Err(CliError::Config("`coefficients` needs six integers a,b,c,d,e,f".into()));
        }
        if self.coefficients.is_some() && self.operator.is_some() {
            return Err(CliError::Config("give either `coefficients` or `operator`, not both".into()));
        }
        if self.half_width.unwrap() <= 0 {
            return Err(CliError::Config("`half_width` must be positive".into()));
        }
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CycleParams {
    #[arg(long, value_parser = parse_field_arg)]
    pub field: Option<FieldArg>,
    #[arg(long = "p", value_name = "POLY")]
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[arg(long = "q", value_name = "POLY")]
    #[serde(rename = "Q")]
    pub q: Option<String>,
    /// Radius range `r_min:r_max` on the section.
    #[arg(long, value_parser = parse_range)]
    pub scan: Option<(f64, f64)>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Longest integration time for one return.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub section_angle: Option<f64>,
    /// `t, x, y` trajectory as CSV: one period of the first cycle (in
    /// backward time for a repelling one), or `trajectory_time` from the
    /// start of the scan.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub trajectory_time: Option<f64>,
}

impl CycleParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, scan = (0.1, 4.0), samples = 200, tol = 1e-9, t_max = 100.0, section_angle = 0.0, trajectory_time = 20.0);
        check_tolerance("tol", self.tol.unwrap())?;
        check_tolerance("t_max", self.t_max.unwrap())?;
        Ok(self)
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    #[arg(long, value_parser = parse_field_arg)]
    pub field: Option<FieldArg>,
    #[arg(long = "p", value_name = "POLY")]
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[arg(long = "q", value_name = "POLY")]
    #[serde(rename = "Q")]
    pub q: Option<String>,
    #[arg(long, value_parser = parse_range)]
    pub scan: Option<(f64, f64)>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub d_max: Option<u32>,
}

impl BoundParams {
    pub fn resolve(mut self) -> Result<Self, CliError> {
        fill!(self, scan = (0.1, 4.0), samples = 200, tol = 1e-9, t_max = 100.0, m_max = 6, d_max = 9);
        check_tolerance("tol", self.tol.unwrap())?;
        check_tolerance("t_max", self.t_max.unwrap())?;
        Ok(self)
    }
}
