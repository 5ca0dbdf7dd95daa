//! Command-line front end: parameter reports, time series, 2-D sweeps,
//! figure data and oracle verification, all emitted as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use cavent_core::liouville::ProjectorAssignment;
use clap::{Parser, Subcommand};

use crate::commands::{figures, Report};
use crate::config::{Layer, RunConfig, TimeDefaults};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "cavent", version, about = "Entanglement of a driven atom in a leaky cavity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// `key = value` file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub layer: Layer,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print the derived dressed-frame parameters
    Params,
    /// Concurrence, entropy and photon number against time
    Timeseries,
    /// Concurrence over a grid of two parameters at fixed time
    Sweep2d,
    /// Concurrence over driving strength and decay rate
    Fig1,
    /// Concurrence against time for several decay rates and drives
    Fig2,
    /// Photon number against time
    Fig3,
    /// Linear entropy against time with and without drive
    Fig4,
    /// Cross-check the closed forms against dense and integrated oracles
    Verify {
        /// Swap the dispersive projectors (the checks must then fail)
        #[arg(long)]
        misassign_projector: bool,
    },
}

impl Command {
    fn time_defaults(&self, g: f64) -> TimeDefaults {
        match self {
            Command::Fig3 => TimeDefaults { t_start: 0.0, t_end: 200.0, steps: 201 },
            Command::Verify { .. } => TimeDefaults { t_start: 0.0, t_end: 300.0, steps: 61 },
            _ => TimeDefaults::periods(g),
        }
    }

    fn writes_directory(&self) -> bool {
        matches!(self, Command::Fig1 | Command::Fig2 | Command::Fig3 | Command::Fig4)
    }
}

/// Stacks flags over the config file over the defaults.
pub fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let file = match &cli.config {
        Some(path) => Layer::from_file(path)?,
        None => Layer::default(),
    };
    RunConfig::resolve(&cli.layer.clone().over(file), |p| cli.command.time_defaults(p.g))
}

pub fn execute(cli: &Cli) -> CliResult<(RunConfig, Report)> {
    let cfg = resolve(cli)?;
    let report = match &cli.command {
        Command::Params => commands::params(&cfg)?,
        Command::Timeseries => commands::timeseries(&cfg)?,
        Command::Sweep2d => commands::sweep2d(&cfg)?,
        Command::Fig1 => figures::fig1(&cfg)?,
        Command::Fig2 => figures::fig2(&cfg)?,
        Command::Fig3 => figures::fig3(&cfg)?,
        Command::Fig4 => figures::fig4(&cfg)?,
        Command::Verify { misassign_projector } => {
            let assignment =
                if *misassign_projector { ProjectorAssignment::Misassigned } else { ProjectorAssignment::Dispersive };
            commands::verify(&cfg, assignment)?
        }
    };
    Ok((cfg, report))
}

fn emit(command: &Command, cfg: &RunConfig, report: &Report, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    for w in &report.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    let text: String = report.text.iter().map(|l| format!("{l}\n")).collect();
    match (&cfg.output, command.writes_directory()) {
        (Some(path), false) if report.tables.is_empty() => std::fs::write(path, &text)?,
        _ => stdout.write_all(text.as_bytes())?,
    }
    if command.writes_directory() {
        let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
        for (stem, table) in &report.tables {
            let path = dir.join(format!("{stem}.csv"));
            table.write_file(&path)?;
            writeln!(stderr, "wrote {}", path.display())?;
        }
    } else {
        for (_, table) in &report.tables {
            match &cfg.output {
                Some(path) => table.write_file(path)?,
                None => table.write_to(stdout)?,
            }
        }
    }
    Ok(())
}

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let result = execute(&cli).and_then(|(cfg, report)| {
        emit(&cli.command, &cfg, &report, stdout, stderr)?;
        match &report.failure {
            Some(f) => Err(CliError::Verification(f.clone())),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}
