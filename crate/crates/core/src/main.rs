use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use halfcyl::config::RunConfig;
use halfcyl::run::{run, Command};

#[derive(Parser)]
#[command(
    name = "halfcyl",
    version,
    about = "Bifurcation toolkit for the overdetermined eigenvalue problem in half-cylinders"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration; built-in defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for emitted files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// List the Neumann modes of the cross-section.
    Modes,
    /// Sample the dispersion curves over a height range.
    Dispersion,
    /// Locate bifurcation heights in the configured window.
    Bifurcations,
    /// Solve the eigenproblem for the configured profile.
    Eig,
    /// Check the finite-difference linearization against the closed form.
    Verify,
    /// Trace the bifurcating branch of the configured mode.
    Branch,
    /// Export the reflected (doubled) domain of a branch point.
    Reflect,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Modes => Command::Modes,
            Cmd::Dispersion => Command::Dispersion,
            Cmd::Bifurcations => Command::Bifurcations,
            Cmd::Eig => Command::Eig,
            Cmd::Verify => Command::Verify,
            Cmd::Branch => Command::Branch,
            Cmd::Reflect => Command::Reflect,
        }
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level().to_string().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn main() -> ExitCode {
    let _ = log::set_logger(&LOGGER).map(|()| log::set_max_level(log::LevelFilter::Warn));
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    };
    let mut config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match run(cli.command.into(), &config, &cli.out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
