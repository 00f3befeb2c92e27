//! `lightlike`: batch analyses of spacelike surfaces in Minkowski 4-space.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lightlike_tool::config::RunConfig;
use lightlike_tool::error::CliError;
use lightlike_tool::run;

#[derive(Parser)]
#[command(name = "lightlike", version, about = "Lightlike curvature analyses of spacelike surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured analyses and write the report; exits 0 unless the
    /// run itself fails.
    Analyze(RunArgs),
    /// Like `analyze`, but exits 1 when any check fails.
    Verify(RunArgs),
    /// Print the built-in surfaces.
    ListCatalog,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Tolerance override `key=value`; may be repeated.
    #[arg(long = "tolerance", value_name = "KEY=VALUE")]
    tolerances: Vec<String>,
    /// Grid override `NxM`.
    #[arg(long, value_name = "NxM")]
    grid: Option<String>,
    /// Output directory, replacing the configured one.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    let src = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(args.config.display(), e))?;
    let mut cfg = RunConfig::parse(&src)?;
    if let Some(g) = &args.grid {
        cfg.set_grid(g)?;
    }
    for t in &args.tolerances {
        cfg.set_tolerance(t)?;
    }
    Ok(cfg)
}

fn run(args: &RunArgs, strict: bool) -> Result<u8, CliError> {
    let cfg = load(args)?;
    let outcome = run::execute(&cfg)?;
    let (report_path, dump_path) = run::output_paths(&cfg, args.out.as_deref());
    run::write_outputs(&outcome, &report_path, &dump_path)?;
    let mut text = String::new();
    for a in &outcome.report.analyses {
        text += &format!("[{}]\n", a.analysis.name());
        if let Some(v) = &a.verdict {
            text += &format!("  verdict: {v}\n");
        }
        for c in &a.checks {
            text += &format!("  {c}\n");
        }
    }
    text += &format!("report: {}\n", report_path.display());
    if outcome.dump.is_some() {
        text += &format!("dump: {}\n", dump_path.display());
    }
    // A closed pipe on stdout does not change the outcome of the run.
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(if strict && !outcome.report.passed { 1 } else { 0 })
}

fn list_catalog() {
    for e in lightlike_core::catalog::ENTRIES {
        match e.parameter {
            Some((p, d)) => println!("{:<24} {} [{p} = {d}]", e.name, e.description),
            None => println!("{:<24} {}", e.name, e.description),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => run(a, false),
        Command::Verify(a) => run(a, true),
        Command::ListCatalog => {
            list_catalog();
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
