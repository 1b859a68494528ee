use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sidelink_hmars::exec::Execution;
use sidelink_hmars::harness::{self, ExperimentConfig, ValidationReport};
use sidelink_hmars::hmars::OutageConvention;
use sidelink_hmars::Error;

#[derive(Parser)]
#[command(
    version,
    about = "Relay selection and hybrid OMA/NOMA activation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// SE against the interfering receiver's distance.
    SweepDd(Common),
    /// NOMA duty cycle over the (r_e, d0T/R) grid.
    DutyCycle(Common),
    /// SE over the (r_e, d0T/R) grid.
    SweepDt(Common),
    /// Check the closed forms against independent oracles.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// as-printed | rederived
    #[arg(long)]
    convention: Option<OutageConvention>,
    /// Append standard-error columns.
    #[arg(long)]
    with_stderr: bool,
    /// Run trials on the calling thread only.
    #[arg(long)]
    serial: bool,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut config = match &self.config {
            // an unreadable config file is a configuration problem too
            Some(path) => ExperimentConfig::load(path).map_err(|e| match e {
                Error::Io { .. } => Error::Config(e.to_string()),
                other => other,
            })?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(convention) = self.convention {
            config.convention = convention;
        }
        config.validate()?;
        Ok(config)
    }

    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

fn write_report(report: &ValidationReport, out: Option<&Path>) -> Result<(), Error> {
    let mut text = String::from("check,measured,tolerance,passed\n");
    for c in &report.checks {
        text.push_str(&format!(
            "{},{},{},{}\n",
            c.name, c.measured, c.tolerance, c.passed
        ));
    }
    let (path, result) = match out {
        Some(path) => (path, std::fs::write(path, text)),
        None => (
            Path::new("<stdout>"),
            std::io::stdout().write_all(text.as_bytes()),
        ),
    };
    result.map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(command: &Command) -> Result<bool, Error> {
    let (common, records) = match command {
        Command::Validate(common) => {
            let report = harness::validate(&common.config()?)?;
            eprint!("{report}");
            write_report(&report, common.out.as_deref())?;
            return Ok(report.passed());
        }
        Command::SweepDd(common) => (
            common,
            harness::sweep_dd(&common.config()?, common.execution())?,
        ),
        Command::DutyCycle(common) => (
            common,
            harness::duty_cycle_grid(&common.config()?, common.execution())?,
        ),
        Command::SweepDt(common) => (
            common,
            harness::sweep_dt(&common.config()?, common.execution())?,
        ),
    };
    harness::emit_csv(&records, common.out.as_deref(), common.with_stderr)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(
            e @ (Error::Config(_) | Error::InvalidParameter { .. } | Error::CoincidentInterferers),
        ) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
