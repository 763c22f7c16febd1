use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use runge::experiments::problem::DivisorSpec;
use runge::experiments::{
    emit_report, render, run_gcd_pipeline, run_main_criterion, run_tau_estimate, Format, PointList, Problem,
    ProblemFile, Report,
};
use runge::geometry::ProjectivePoint;
use runge::heights::divisor_report;
use runge::numfield::{BaseField, Place};
use runge::points::{enumerate_affine_integral, enumerate_projective_points, EnumerationSpec};
use runge::Error;

#[derive(Parser)]
#[command(name = "runge", version, about = "Heights, integral points and GCD bounds on projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["csv", "json"])]
    format: String,
    /// Directory for the report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    height_bound: Option<f64>,
    #[arg(long = "box")]
    box_bound: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Local heights of a point against a divisor.
    Heights {
        /// Point such as "(6:10:1)".
        point: String,
        /// JSON file with `ambient_dim`, optional `field` and `divisor`.
        #[arg(long)]
        divisor: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Empirical τ-profile of a problem's cycle.
    Tau {
        problem: PathBuf,
        #[command(flatten)]
        bounds: Overrides,
        /// Fit a low-degree curve through the tier witnesses.
        #[arg(long)]
        peel: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Main Criterion verification; exits with 2 when the hypothesis fails.
    Criterion {
        problem: PathBuf,
        #[command(flatten)]
        bounds: Overrides,
        #[arg(long)]
        waive_snc: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Auxiliary form and empirical GCD bound.
    GcdBound {
        problem: PathBuf,
        #[command(flatten)]
        bounds: Overrides,
        #[command(flatten)]
        output: Output,
    },
    /// Points of bounded height, or integral points in a box.
    Enumerate {
        spec: PathBuf,
        #[command(flatten)]
        bounds: Overrides,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Deserialize)]
struct DivisorFile {
    #[serde(default = "rationals")]
    field: BaseField,
    ambient_dim: usize,
    divisor: DivisorSpec,
}

fn rationals() -> BaseField {
    BaseField::Rationals
}

fn load_problem(path: &Path, bounds: &Overrides, edit: impl FnOnce(&mut ProblemFile)) -> runge::Result<Problem> {
    let mut file = ProblemFile::load(path)?;
    if let Some(h) = bounds.height_bound {
        file.bounds.height = Some(h);
    }
    if let Some(b) = bounds.box_bound {
        file.bounds.box_bound = Some(b);
    }
    edit(&mut file);
    file.resolve()
}

fn write(report: &Report, output: &Output, input: &Path, tag: &str) -> runge::Result<()> {
    let format: Format = output.format.parse()?;
    match &output.out {
        None => {
            print!("{}", render(report, format)?);
            Ok(())
        }
        Some(dir) => {
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
            let path = dir.join(format!("{stem}.{tag}.{}", format.extension()));
            emit_report(report, format, &path)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

/// Exit code 2 signals a run that completed with its hypothesis unmet.
fn run(cli: Cli) -> runge::Result<u8> {
    match cli.command {
        Command::Heights { point, divisor, output } => {
            let file: DivisorFile = serde_json::from_str(&std::fs::read_to_string(&divisor)?)?;
            let d = file.divisor.to_divisor(file.ambient_dim)?;
            let x = ProjectivePoint::parse(file.field, &point)?;
            let report = divisor_report(&d, &[Place::infinity(file.field)], &x)?;
            write(&Report::Heights(report), &output, &divisor, "heights")?;
            Ok(0)
        }
        Command::Tau { problem, bounds, peel, output } => {
            let p = load_problem(&problem, &bounds, |f| f.peel |= peel)?;
            write(&Report::Tau(run_tau_estimate(&p)?), &output, &problem, "tau")?;
            Ok(0)
        }
        Command::Criterion { problem, bounds, waive_snc, output } => {
            let p = load_problem(&problem, &bounds, |f| f.waive_snc |= waive_snc)?;
            let report = run_main_criterion(&p)?;
            let code = if report.verdict.hypothesis_satisfied { 0 } else { 2 };
            write(&Report::Criterion(report), &output, &problem, "criterion")?;
            Ok(code)
        }
        Command::GcdBound { problem, bounds, output } => {
            let p = load_problem(&problem, &bounds, |_| {})?;
            write(&Report::GcdBound(run_gcd_pipeline(&p)?), &output, &problem, "gcd-bound")?;
            Ok(0)
        }
        Command::Enumerate { spec, bounds, output } => {
            let mut s: EnumerationSpec = serde_json::from_str(&std::fs::read_to_string(&spec)?)?;
            if bounds.height_bound.is_some() || bounds.box_bound.is_some() {
                s.height_bound = bounds.height_bound;
                s.box_bound = bounds.box_bound;
            }
            let points: Vec<ProjectivePoint> = match s.box_bound {
                Some(_) => enumerate_affine_integral(&s)?,
                None => enumerate_projective_points(&s)?.collect(),
            };
            let list = PointList { nvars: s.ambient_dim + 1, points };
            write(&Report::Points(list), &output, &spec, "points")?;
            Ok(0)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::HypothesisViolation(_) | Error::NotSnc(_) => 2,
        Error::PrecisionExhausted(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
