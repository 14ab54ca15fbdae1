//! `restrep`: run the scenario checks and write tables, CSV or JSON reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails (the
//! expected/computed diff goes to stderr) and 2 on usage errors.

mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::debug;

use report::{Format, Report};
use scenarios::{RunError, Scenario, ScenarioConfig, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "restrep", version, about = "Representation-theoretic checks for finite Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named scenario.
    Run {
        scenario: Scenario,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        field_ext: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Support of a module given as JSON over an algebra given as JSON.
    Support {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        field_ext: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(report: &Report, output: &Output) -> ExitCode {
    let text = report.render(output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        eprint!("{}", report.diff());
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RESTREP_LOG", "warn")).init();
    let cli = Cli::parse();
    debug!("{cli:?}");
    let output = match &cli.command {
        Command::Run { output, .. } | Command::Support { output, .. } => output,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(output.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Run { scenario, p, r, n, m, field_ext, seed, trials, .. } => scenarios::run(&ScenarioConfig {
            scenario: *scenario,
            p: *p,
            r: *r,
            n: *n,
            m: *m,
            field_ext: *field_ext,
            seed: *seed,
            trials: *trials,
        }),
        Command::Support { module, algebra, field_ext, .. } => scenarios::support_from_files(algebra, module, *field_ext),
    });
    match result {
        Ok(report) => emit(&report, output),
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
