//! `opgeom` command line: parses flags and config files, runs one check and
//! prints a JSON [`Report`] on stdout.
//!
//! Exit codes: 0 success, 1 a FAIL or VIOLATION verdict, 2 usage or config
//! error, 3 numeric failure (divergence, degenerate node, missing return).

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use schemars::schema_for;
use serde::Serialize;
use serde_json::Value;

use opgeom::Verdict;

use config::*;
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "opgeom", version, about = "Curvature cocycles and polynomial vector-field checks")]
pub struct Cli {
    /// JSON file with the subcommand parameters; explicit flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Total curvature against 2πχ, orderings of ∬ f dg dh and ∬K = 3∬ f dg dh.
    GaussBonnet(GaussBonnetParams),
    /// Cyclic and Hochschild identities, projection defects and λ.
    CocycleCheck(CocycleParams),
    /// τ₂(E, E, E) and ∬K along a curve of projections, plus commutator residuals.
    DeformStability(StabilityParams),
    /// Truncated corank ladder of `P∂x + Q∂y` (or any operator).
    Corank(CorankParams),
    /// Fourier conjugate and principal symbol.
    Conjugate(ConjugateParams),
    /// Discriminant and pointwise ellipticity of a second-order symbol.
    Ellipticity(EllipticityParams),
    /// Return-map scan for limit cycles.
    LimitCycles(CycleParams),
    /// Detected cycles against the corank bound.
    BoundCompare(BoundParams),
    /// Print the JSON schema of a subcommand's config file.
    Schema { subcommand: String },
}

pub const SUBCOMMANDS: [&str; 8] = [
    "gauss-bonnet",
    "cocycle-check",
    "deform-stability",
    "corank",
    "conjugate",
    "ellipticity",
    "limit-cycles",
    "bound-compare",
];

/// Schema of the config record for `subcommand`.
pub fn config_schema(subcommand: &str) -> Option<Value> {
    let s = match subcommand {
        "gauss-bonnet" => schema_for!(GaussBonnetParams),
        "cocycle-check" => schema_for!(CocycleParams),
        "deform-stability" => schema_for!(StabilityParams),
        "corank" => schema_for!(CorankParams),
        "conjugate" => schema_for!(ConjugateParams),
        "ellipticity" => schema_for!(EllipticityParams),
        "limit-cycles" => schema_for!(CycleParams),
        "bound-compare" => schema_for!(BoundParams),
        _ => return None,
    };
    Some(serde_json::to_value(s).expect("schema serializes"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub duration_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub subcommand: String,
    /// Resolved parameters, defaults included.
    pub config: Value,
    pub result: Value,
    pub verdict: Option<Verdict>,
    pub metadata: Metadata,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::Fail | Verdict::Violation) => 1,
            _ => 0,
        }
    }

    /// Everything except [`Metadata`], as pretty JSON.
    pub fn payload_json(&self) -> String {
        let Report { subcommand, config, result, verdict, .. } = self;
        serde_json::to_string_pretty(&serde_json::json!({
            "subcommand": subcommand, "config": config, "result": result, "verdict": verdict,
        }))
        .expect("report serializes")
    }
}

pub enum Output {
    Report(Box<Report>),
    /// Text printed as is (help, version, schemas, `conjugate --plain`).
    Text { text: String, code: i32 },
}

fn dispatch(cli: &Cli) -> Result<(&'static str, commands::Outcome), CliError> {
    let cfg = cli.config.as_deref();
    Ok(match &cli.command {
        Command::GaussBonnet(p) => ("gauss-bonnet", commands::gauss_bonnet(merge(p, cfg)?.resolve()?)?),
        Command::CocycleCheck(p) => ("cocycle-check", commands::cocycle_check(merge(p, cfg)?.resolve()?)?),
        Command::DeformStability(p) => ("deform-stability", commands::deform_stability(merge(p, cfg)?.resolve()?)?),
        Command::Corank(p) => ("corank", commands::corank(merge(p, cfg)?.resolve()?)?),
        Command::Conjugate(p) => ("conjugate", commands::conjugate_cmd(merge(p, cfg)?.resolve()?)?),
        Command::Ellipticity(p) => ("ellipticity", commands::ellipticity(merge(p, cfg)?.resolve()?)?),
        Command::LimitCycles(p) => ("limit-cycles", commands::limit_cycles(merge(p, cfg)?.resolve()?)?),
        Command::BoundCompare(p) => ("bound-compare", commands::bound_compare_cmd(merge(p, cfg)?.resolve()?)?),
        Command::Schema { .. } => unreachable!("handled before dispatch"),
    })
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn execute<I, T>(argv: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Output::Text { text: e.to_string(), code: 0 }),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };
    if let Command::Schema { subcommand } = &cli.command {
        let schema = config_schema(subcommand).ok_or_else(|| {
            CliError::Usage(format!("unknown subcommand `{subcommand}` (expected one of {})", SUBCOMMANDS.join(", ")))
        })?;
        let text = serde_json::to_string_pretty(&schema).expect("schema serializes") + "\n";
        return Ok(Output::Text { text, code: 0 });
    }
    let start = Instant::now();
    let (name, out) = dispatch(&cli)?;
    let report = Report {
        subcommand: name.to_string(),
        config: out.config,
        result: out.result,
        verdict: out.verdict,
        metadata: Metadata { version: env!("CARGO_PKG_VERSION"), duration_seconds: start.elapsed().as_secs_f64() },
    };
    if let Some(path) = &cli.output {
        let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        std::fs::write(path, json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    match out.plain {
        Some(text) => Ok(Output::Text { text: text + "\n", code: report.exit_code() }),
        None => Ok(Output::Report(Box::new(report))),
    }
}

/// Runs the command line and returns the process exit code. Reports go to
/// stdout (unless `--output` is given), errors to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let to_file = argv.iter().any(|a| a == "-o" || a == "--output" || a.to_string_lossy().starts_with("--output="));
    if argv.is_empty() {
        argv.push("opgeom".into());
    }
    let mut stdout = std::io::stdout().lock();
    match execute(argv) {
        Ok(Output::Text { text, code }) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Ok(Output::Report(report)) => {
            if !to_file {
                let json = serde_json::to_string_pretty(&report).expect("report serializes");
                let _ = writeln!(stdout, "{json}");
            }
            if let Some(v) = report.verdict {
                eprintln!("{}: {v}", report.subcommand);
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("opgeom: {e}");
            e.exit_code()
        }
    }
}
