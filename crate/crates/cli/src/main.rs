use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sgspec_cli::{
    emit_report, exit_code, parse_times, run_scenario, write_atomic, CheckId, Format, InputSource,
    RunError, ScenarioConfig,
};
use sgspec_core::catalog::CATALOG_IDS;
use sgspec_core::io::parse_real;
use sgspec_core::QuadratureConfig;

#[derive(Parser)]
#[command(
    name = "sgspec",
    version,
    about = "Spectral checks for matrix semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a generator and write a report.
    Analyze(AnalyzeArgs),
    /// List catalog ids usable as `catalog:<id>?key=value`.
    Catalog,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Generator JSON file or `catalog:<id>?key=value&...`.
    #[arg(short = 'i', long)]
    input: String,
    /// Comma-separated check ids, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Comma-separated times; `pi` suffixes allowed.
    #[arg(long = "t", default_value = "1")]
    t: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path; stdout when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature settings as JSON.
    #[arg(long)]
    quadrature: Option<PathBuf>,
    /// A known period, e.g. `4pi`; otherwise guessed from the spectrum.
    #[arg(long)]
    period_hint: Option<String>,
}

fn config(args: &AnalyzeArgs) -> Result<ScenarioConfig, RunError> {
    let quadrature = match &args.quadrature {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
            QuadratureConfig::from_json(&text)?
        }
        None => QuadratureConfig::default(),
    };
    Ok(ScenarioConfig {
        input: InputSource::parse(&args.input),
        quadrature,
        checks: CheckId::parse_list(&args.checks)?,
        t_values: parse_times(&args.t)?,
        tol: args.tol,
        format: args.format.parse::<Format>()?,
        seed: args.seed,
        period_hint: args.period_hint.as_deref().map(parse_real).transpose()?,
    })
}

fn analyze(args: &AnalyzeArgs) -> Result<u8, RunError> {
    let cfg = config(args)?;
    let results = run_scenario(&cfg)?;
    let bytes = emit_report(&results, cfg.format)?;
    match &args.output {
        Some(path) => write_atomic(path, &bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    for r in &results {
        eprintln!("{:<4} {}", r.report.verdict.as_str(), r.report.id);
        for e in r.report.failures() {
            match e.t {
                Some(t) => eprintln!(
                    "     {} at t = {t}: {:.3e} > {:.3e}",
                    e.name, e.value, e.threshold
                ),
                None => eprintln!("     {}: {:.3e} > {:.3e}", e.name, e.value, e.threshold),
            }
        }
    }
    Ok(exit_code(&results))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog => {
            for id in CATALOG_IDS {
                println!("{id}");
            }
            ExitCode::SUCCESS
        }
        Command::Analyze(args) => match analyze(&args) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
