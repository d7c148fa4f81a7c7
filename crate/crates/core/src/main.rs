use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use clifgeo::catalog;
use clifgeo::geometry::Sampling;
use clifgeo::report::Report;
use clifgeo::spec::{read_json_file, EmFieldSpec, SpacetimeSpec, SpecError};
use clifgeo::suite::{run, selftest, Command, RunError, RunOptions};

/// Check coframe geometry, Killing symmetries and energy-momentum identities.
#[derive(Parser)]
#[command(name = "clifgeo", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cartan structure, curvature, torsion decomposition and contorsion checks.
    Analyze(Common),
    /// Killing and torsion-invariance verdicts for every candidate.
    Killing(Common),
    /// Maxwell residuals, stress identities and Noether current closure.
    Em {
        #[command(flatten)]
        common: Common,
        /// Field file with frame components F_ab and optional J_a.
        #[arg(long)]
        field: PathBuf,
    },
    /// Sparling identity and superpotential checks.
    Grav {
        #[command(flatten)]
        common: Common,
        /// Cosmological term in the vacuum field equation.
        #[arg(long, allow_hyphen_values = true)]
        m2: Option<f64>,
    },
    /// Mass surface integral at the given coordinate radii, extrapolated to infinity.
    Mass {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
    },
    /// Algebra and expression property suite.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print a builtin spacetime as a JSON spec file.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin spacetimes.
    List,
}

#[derive(Args)]
struct Common {
    /// Spec file path or builtin name.
    spec: String,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Identity tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Killing and torsion-invariance verdict tolerance.
    #[arg(long = "verdict-tol", default_value_t = 1e-6)]
    verdict_tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Override a spec parameter, name=value.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Override a spec definition, name=expr.
    #[arg(long = "define", value_parser = parse_define)]
    defines: Vec<(String, String)>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value for '{}': {e}", k.trim()))?;
    Ok((k.trim().to_string(), v))
}

fn parse_define(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=expr")?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// A path that exists is read as a file; anything else must name a builtin.
fn load_spec(arg: &str) -> Result<SpacetimeSpec, SpecError> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json_file(path);
    }
    catalog::builtin(arg)
}

fn emit(report: &Report, out: Option<&Path>, json: bool) -> Result<(), RunError> {
    if let Some(p) = out {
        std::fs::write(p, report.to_json() + "\n").map_err(|e| SpecError::Io { path: p.display().to_string(), message: e.to_string() })?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn run_common(cmd: Command, c: &Common, tweak: impl FnOnce(&mut RunOptions) -> Result<(), RunError>) -> Result<Report, RunError> {
    let spec = load_spec(&c.spec)?.with_params(&c.params)?.with_definitions(&c.defines)?;
    let st = spec.compile()?;
    let mut opts = RunOptions {
        sampling: Sampling { count: c.samples, seed: c.seed },
        tol: c.tol,
        verdict_tol: c.verdict_tol,
        ..RunOptions::default()
    };
    tweak(&mut opts)?;
    let report = run(cmd, &st, &opts)?;
    emit(&report, c.out.as_deref(), c.json)?;
    Ok(report)
}

fn dispatch(cli: Cli) -> Result<i32, RunError> {
    let report = match cli.cmd {
        Cmd::Analyze(c) => run_common(Command::Analyze, &c, |_| Ok(()))?,
        Cmd::Killing(c) => run_common(Command::Killing, &c, |_| Ok(()))?,
        Cmd::Em { common, field } => run_common(Command::Em, &common, |o| {
            o.field = Some(read_json_file::<EmFieldSpec>(&field)?);
            Ok(())
        })?,
        Cmd::Grav { common, m2 } => run_common(Command::Grav, &common, |o| {
            o.m2 = m2;
            Ok(())
        })?,
        Cmd::Mass { common, radii } => run_common(Command::Mass, &common, |o| {
            o.radii = radii;
            Ok(())
        })?,
        Cmd::Selftest { seed, out, json } => {
            let r = selftest(seed);
            emit(&r, out.as_deref(), json)?;
            r
        }
        Cmd::Export { name, out } => {
            let text = catalog::builtin(&name)?.to_json() + "\n";
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| SpecError::Io { path: p.display().to_string(), message: e.to_string() })?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
        Cmd::List => {
            for spec in catalog::all() {
                let desc = spec.metadata.as_ref().and_then(|m| m.description.clone()).unwrap_or_default();
                println!("{:<24} {:<13} {desc}", spec.name, spec.connection.label());
            }
            return Ok(0);
        }
    };
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
