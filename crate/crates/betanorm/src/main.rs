use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use betanorm::config::{Command, ExperimentConfig};
use betanorm::run::run;
use clap::Parser;

/// Beta-normality experiments for self-similar measures.
///
/// Prints the run report as JSON and writes it, with any tables, into the
/// output directory. Exit code 0 when every check passes, 2 when a
/// tolerance check fails, 1 on error.
#[derive(Debug, Parser)]
#[command(version, propagate_version = true)]
struct Cli {
    /// Master seed; overrides the seed of a config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run a JSON config (e.g. an echoed report config) instead of a subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the report and tables.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Print only the checks instead of the full report.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

fn config_of(cli: &Cli) -> Result<ExperimentConfig> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => bail!("give either --config or a subcommand, not both"),
        (None, None) => bail!("a subcommand or --config is required (see --help)"),
        (None, Some(c)) => Ok(ExperimentConfig { seed: cli.seed.unwrap_or(0), command: c.clone() }),
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let text = unwrap_report(&text).unwrap_or(text);
            let mut cfg = ExperimentConfig::from_json(&text).with_context(|| format!("in {}", p.display()))?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            Ok(cfg)
        }
    }
}

/// Accepts a whole report as a config too, so reports rerun directly.
fn unwrap_report(text: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.get("config").filter(|_| v.get("checks").is_some()).map(|c| c.to_string())
}

fn main_inner(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let cfg = config_of(&cli)?;
    let start = Instant::now();
    let mut out = run(&cfg)?;
    if cli.timing {
        out.report.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    out.write(&cli.out_dir)?;
    if cli.quiet {
        for c in &out.report.checks {
            println!("{} {} = {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, betanorm::report::num(c.value), c.tolerance);
        }
    } else {
        print!("{}", out.report.to_json());
    }
    for w in &out.report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(out.report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
