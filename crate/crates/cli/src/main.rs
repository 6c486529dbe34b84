mod carleman;
mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, RunFile};
use crate::report::{Outputs, ReportDocument};

#[derive(Parser, Debug)]
#[command(name = "lpcarleman", version, about = "Littlewood-Paley and Carleman-inequality diagnostics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON run file: `{"command", "seed", "threads", "out", "csv", "svg", "params"}`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every sampled field [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON report path; the report goes to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV table path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// SVG plot path (Carleman sweeps only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "LPCARLEMAN_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conditions on a modulus of continuity.
    Modulus {
        #[command(subcommand)]
        action: ModulusAction,
    },
    /// Tabulate the weight built from a modulus.
    Weight {
        #[command(subcommand)]
        action: WeightAction,
    },
    /// Dyadic decomposition of a grid function.
    Lp {
        #[command(subcommand)]
        action: LpAction,
    },
    /// Numerical checks of the analytic estimates.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Carleman inequality sweeps.
    Carleman {
        #[command(subcommand)]
        action: CarlemanAction,
    },
}

#[derive(Subcommand, Debug)]
enum ModulusAction {
    Check(commands::ModulusParams),
}

#[derive(Subcommand, Debug)]
enum WeightAction {
    Build(commands::WeightParams),
}

#[derive(Subcommand, Debug)]
enum LpAction {
    Decompose(commands::LpParams),
}

#[derive(Subcommand, Debug)]
enum VerifyAction {
    Bernstein(commands::BernsteinParams),
    Commutator(commands::CommutatorParams),
    Remainder(commands::RemainderParams),
    Mollifier(commands::MollifierParams),
}

#[derive(Subcommand, Debug)]
enum CarlemanAction {
    /// Runs the sweep described by `--config`.
    Run,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Modulus { .. } => "modulus check",
            Command::Weight { .. } => "weight build",
            Command::Lp { .. } => "lp decompose",
            Command::Verify { action } => match action {
                VerifyAction::Bernstein(_) => "verify bernstein",
                VerifyAction::Commutator(_) => "verify commutator",
                VerifyAction::Remainder(_) => "verify remainder",
                VerifyAction::Mollifier(_) => "verify mollifier",
            },
            Command::Carleman { .. } => "carleman run",
        }
    }
}

/// Failure modes that map onto exit code 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Run(#[from] anyhow::Error),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let started = Instant::now();
    let command = cli.command.name();
    let file = match &cli.common.config {
        Some(path) => Some(RunFile::load(path, command)?),
        None => None,
    };
    let seed = cli.common.seed.or(file.as_ref().and_then(|f| f.seed)).unwrap_or(0);
    let threads = cli.common.threads.or(file.as_ref().and_then(|f| f.threads)).unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let pick = |flag: &Option<PathBuf>, f: fn(&RunFile) -> Option<PathBuf>| flag.clone().or(file.as_ref().and_then(f));
    let outputs = Outputs {
        json: pick(&cli.common.out, |f| f.out.clone()),
        csv: pick(&cli.common.csv, |f| f.csv.clone()),
        svg: pick(&cli.common.svg, |f| f.svg.clone()),
    };
    let params = file.map(|f| f.params);
    let mut doc = ReportDocument::new(command, seed);
    match cli.command {
        Command::Modulus { action: ModulusAction::Check(p) } => commands::modulus(config::merge(p, params)?, &mut doc, &outputs)?,
        Command::Weight { action: WeightAction::Build(p) } => commands::weight(config::merge(p, params)?, &mut doc, &outputs)?,
        Command::Lp { action: LpAction::Decompose(p) } => commands::lp(config::merge(p, params)?, &mut doc, &outputs)?,
        Command::Verify { action } => match action {
            VerifyAction::Bernstein(p) => commands::bernstein(config::merge(p, params)?, &mut doc, &outputs)?,
            VerifyAction::Commutator(p) => commands::commutator(config::merge(p, params)?, &mut doc, &outputs)?,
            VerifyAction::Remainder(p) => commands::remainder(config::merge(p, params)?, &mut doc, &outputs)?,
            VerifyAction::Mollifier(p) => commands::mollifier(config::merge(p, params)?, &mut doc, &outputs)?,
        },
        Command::Carleman { action: CarlemanAction::Run } => {
            let params = params.ok_or(ConfigError::Missing("carleman run requires --config".into()))?;
            carleman::run(config::parse(params)?, &mut doc, &outputs)?
        }
    }
    doc.time("total", started);
    doc.write(&outputs)?;
    Ok(doc.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
