//! `hqs`: run the hidden-quantum-state experiments from the command line.
//!
//! Exit codes are the machine contract: 0 the experiment verdict passed,
//! 1 it failed, 2 usage or config error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hqs_core::experiments::{self, ExperimentConfig, ExperimentKind, TraceLog};

/// Per-trial selection traces written by `--trace` are capped at this many
/// lines.
const TRACE_CAP: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "hqs",
    version,
    about = "Hidden-quantum-state outcome selection experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome frequencies against the Born distribution
    #[command(name = "born-check")]
    BornCheck(RunArgs),
    /// Golden qutrit pair selecting different outcomes in two bases
    Contextuality(RunArgs),
    /// Entangled pair: B's outcome depends on A's measurement choice
    Nonlocality(RunArgs),
    /// B's marginals across A-contexts, with known-hidden-state counter-demo
    #[command(name = "no-signaling")]
    NoSignaling(RunArgs),
    /// CHSH correlators and S for the singlet plus a product-state control
    Chsh(RunArgs),
    /// Alternating Z/X measurements with hidden-state refresh policies
    Sequential(RunArgs),
    /// Photon counting behind a 50/50 beamsplitter at small photon number
    Beamsplitter(RunArgs),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::BornCheck(_) => ExperimentKind::BornCheck,
            Command::Contextuality(_) => ExperimentKind::Contextuality,
            Command::Nonlocality(_) => ExperimentKind::Nonlocality,
            Command::NoSignaling(_) => ExperimentKind::NoSignaling,
            Command::Chsh(_) => ExperimentKind::Chsh,
            Command::Sequential(_) => ExperimentKind::Sequential,
            Command::Beamsplitter(_) => ExperimentKind::Beamsplitter,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::BornCheck(a)
            | Command::Contextuality(a)
            | Command::Nonlocality(a)
            | Command::NoSignaling(a)
            | Command::Chsh(a)
            | Command::Sequential(a)
            | Command::Beamsplitter(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "defaults",
        required_unless_present = "defaults"
    )]
    config: Option<PathBuf>,
    /// Run with the built-in golden config
    #[arg(long)]
    defaults: bool,
    /// Seed override (falls back to HQS_SEED, then the config seed)
    #[arg(long, env = "HQS_SEED")]
    seed: Option<u64>,
    /// Trial-count override
    #[arg(long)]
    trials: Option<u64>,
    /// Report file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write per-trial selection traces (JSONL, capped at 10000 lines)
    #[arg(long)]
    trace: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A fully resolved run: experiment, effective config, and output plan.
struct RunSpec {
    config: ExperimentConfig,
    out: Option<PathBuf>,
    format: Format,
    trace: bool,
}

fn resolve(kind: ExperimentKind, args: &RunArgs) -> Result<RunSpec, String> {
    let mut config = if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        let named = config
            .kind()
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        if named != kind {
            return Err(format!(
                "config names experiment {named} but the {kind} subcommand was invoked"
            ));
        }
        config
    } else {
        ExperimentConfig::defaults(kind)
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    Ok(RunSpec {
        config,
        out: args.out.clone(),
        format: args.format,
        trace: args.trace,
    })
}

fn trace_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(path) => {
            let mut name = path.file_name().unwrap_or_default().to_os_string();
            name.push(".trace.jsonl");
            path.with_file_name(name)
        }
        None => PathBuf::from("hqs-trace.jsonl"),
    }
}

fn execute(spec: &RunSpec) -> Result<bool, String> {
    let mut log = if spec.trace {
        TraceLog::capped(TRACE_CAP)
    } else {
        TraceLog::disabled()
    };
    let report = experiments::run_traced(&spec.config, &mut log).map_err(|e| e.to_string())?;

    let rendered = match spec.format {
        Format::Json => {
            let mut json = report.to_json();
            json.push('\n');
            json
        }
        Format::Csv => report.to_csv().map_err(|e| e.to_string())?,
    };
    match &spec.out {
        Some(path) => fs::write(path, &rendered)
            .map_err(|e| format!("cannot write report {}: {e}", path.display()))?,
        None => print!("{rendered}"),
    }

    if spec.trace {
        let path = trace_path(spec.out.as_deref());
        let mut lines = String::new();
        for trace in log.traces() {
            lines.push_str(&serde_json::to_string(trace).expect("trace serializes"));
            lines.push('\n');
        }
        fs::write(&path, lines)
            .map_err(|e| format!("cannot write traces {}: {e}", path.display()))?;
        eprintln!(
            "hqs: wrote {} selection traces to {}",
            log.traces().len(),
            path.display()
        );
    }

    let golden = report.golden_checks.len();
    let gated = report.estimates.iter().filter(|e| e.gated).count();
    eprintln!(
        "hqs: {} {} ({golden} golden checks, {gated} gated estimates, seed {})",
        report.name,
        if report.passed() { "PASS" } else { "FAIL" },
        report.seed
    );
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let spec = match resolve(kind, cli.command.args()) {
        Ok(spec) => spec,
        Err(message) => {
            eprintln!("hqs: {message}");
            return ExitCode::from(2);
        }
    };
    match execute(&spec) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("hqs: {message}");
            ExitCode::from(2)
        }
    }
}
