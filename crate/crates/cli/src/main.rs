mod arm;
mod output;
mod quad;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use linkage_core::LinkageError;
use serde::Serialize;
use serde_json::Value;

use output::{Format, OutputSpec};

/// Malformed flags or values that the core library never sees.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "linkage", version, about = "Moduli spaces of four-bar linkages and 3-arms, and their cross-ratio images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed four-bar linkages Q(a, b, c, d).
    Quad {
        #[command(subcommand)]
        command: QuadCommand,
    },
    /// Planar robot 3-arms A(a, b, c).
    Arm {
        #[command(subcommand)]
        command: ArmCommand,
    },
}

#[derive(Subcommand)]
enum QuadCommand {
    /// Topology, connectedness and surjectivity.
    Classify(QuadArgs),
    /// Image arc of the cross-ratio with sampled moduli curves.
    Image(QuadArgs),
    /// Fold points of arg R and the mapping degree.
    Critical(QuadArgs),
}

#[derive(Subcommand)]
enum ArmCommand {
    /// Slice images swept by the end-to-end distance.
    Movie(ArmArgs),
    /// Fold curves on the torus and a preimage-count audit.
    Critical(ArmArgs),
    /// The annulus image with its fold boundaries.
    Image(ArmArgs),
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Significant digits of printed numbers.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(3..=17))]
    precision: u8,
    /// Also write the JSON run report here (useful with csv/svg output).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock duration in the run report (breaks byte-identity).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct QuadArgs {
    /// Side lengths a,b,c,d.
    #[arg(long)]
    lengths: String,
    /// Samples per traced component.
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ArmArgs {
    /// Link lengths a,b,c.
    #[arg(long)]
    lengths: String,
    /// Approximate number of movie frames.
    #[arg(long, default_value_t = 24)]
    frames: usize,
    /// Torus grid resolution per side.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Directory receiving one SVG and one CSV per frame plus summary.json.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport {
    tool: &'static str,
    version: &'static str,
    command: String,
    inputs: Value,
    result: Value,
    manifest: Vec<ManifestEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_seconds: Option<f64>,
}

/// What a command produced: the JSON result plus renderings for the other
/// formats and any side files it already wrote.
pub struct Outcome {
    pub result: Value,
    pub csv: Option<Vec<u8>>,
    pub svg: Option<Vec<u8>>,
    pub manifest: Vec<ManifestEntry>,
}

pub struct Context {
    pub spec: OutputSpec,
    pub command: String,
    pub inputs: Value,
    started: Instant,
    timing: bool,
}

impl Context {
    pub fn report(&self, result: Value, manifest: Vec<ManifestEntry>) -> Result<Value> {
        let report = RunReport {
            tool: "linkage",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            inputs: self.inputs.clone(),
            result,
            manifest,
            duration_seconds: self.timing.then(|| self.started.elapsed().as_secs_f64()),
        };
        self.spec.json(&report)
    }
}

fn finish(ctx: &Context, outcome: Outcome, report_path: Option<&std::path::Path>) -> Result<()> {
    let Outcome {
        result,
        csv,
        svg,
        manifest,
    } = outcome;
    let body = match ctx.spec.format {
        Format::Json => None,
        Format::Csv => Some(csv.ok_or_else(|| output::unsupported(&ctx.command, Format::Csv))?),
        Format::Svg => Some(svg.ok_or_else(|| output::unsupported(&ctx.command, Format::Svg))?),
    };
    let mut manifest = manifest;
    if let (Some(path), Some(bytes)) = (&ctx.spec.out, &body) {
        manifest.push(ManifestEntry {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
        });
    }
    let report = output::json_bytes(&ctx.report(result, manifest)?)?;
    match body {
        Some(bytes) => output::emit(ctx.spec.out.as_deref(), &bytes)?,
        None => output::emit(ctx.spec.out.as_deref(), &report)?,
    }
    if let Some(path) = report_path {
        output::emit(Some(path), &report)?;
    }
    Ok(())
}

fn context(command: &str, out: &OutArgs, inputs: Value) -> Context {
    Context {
        spec: OutputSpec {
            format: out.format,
            out: out.out.clone(),
            precision: out.precision as usize,
        },
        command: command.to_string(),
        inputs,
        started: Instant::now(),
        timing: out.timing,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Quad { command } => {
            let (name, args) = match &command {
                QuadCommand::Classify(a) => ("quad classify", a),
                QuadCommand::Image(a) => ("quad image", a),
                QuadCommand::Critical(a) => ("quad critical", a),
            };
            let inputs = serde_json::json!({
                "lengths": args.lengths,
                "samples": args.samples,
                "precision": args.out.precision,
            });
            let ctx = context(name, &args.out, inputs);
            let l = quad::parse(&args.lengths)?;
            let outcome = match command {
                QuadCommand::Classify(_) => quad::classify(&ctx, &l)?,
                QuadCommand::Image(ref a) => quad::image(&ctx, &l, a.samples)?,
                QuadCommand::Critical(ref a) => quad::critical(&ctx, &l, a.samples)?,
            };
            finish(&ctx, outcome, args.out.report.as_deref())
        }
        Command::Arm { command } => {
            let (name, args) = match &command {
                ArmCommand::Movie(a) => ("arm movie", a),
                ArmCommand::Critical(a) => ("arm critical", a),
                ArmCommand::Image(a) => ("arm image", a),
            };
            let inputs = serde_json::json!({
                "lengths": args.lengths,
                "frames": args.frames,
                "grid": args.grid,
                "precision": args.out.precision,
            });
            let ctx = context(name, &args.out, inputs);
            let l = arm::parse(&args.lengths)?;
            let outcome = match command {
                ArmCommand::Movie(ref a) => {
                    arm::movie(&ctx, &l, a.frames, a.grid, a.emit_dir.as_deref())?
                }
                ArmCommand::Critical(ref a) => arm::critical(&ctx, &l, a.grid)?,
                ArmCommand::Image(ref a) => arm::image(&ctx, &l, a.frames, a.grid)?,
            };
            finish(&ctx, outcome, args.out.report.as_deref())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<LinkageError>() {
        return match e {
            LinkageError::NonGenericArm(_) => 3,
            _ => 2,
        };
    }
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
