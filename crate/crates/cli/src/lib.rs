//! Command-line front end for `fdgain`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "fdgain", version, about = "Full-duplex rate gain region analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate gain region boundary against self-interference RSSI.
    Region(Overrides),
    /// Passive suppression needed to reach a target region.
    Design(Overrides),
    /// Mean FD and HD rates against signal-of-interest RSSI.
    Rates(Overrides),
    /// Sample-level simulation of one link.
    Simulate(Overrides),
    /// Mean FD and HD rates against transmit power at a fixed distance.
    SweepPower(Overrides),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Region(_) => "region",
            Command::Design(_) => "design",
            Command::Rates(_) => "rates",
            Command::Simulate(_) => "simulate",
            Command::SweepPower(_) => "sweep-power",
        }
    }

    fn overrides(&self) -> &Overrides {
        match self {
            Command::Region(o)
            | Command::Design(o)
            | Command::Rates(o)
            | Command::Simulate(o)
            | Command::SweepPower(o) => o,
        }
    }
}

/// Resolves the config, runs the command and writes its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.command.overrides())?;
    let table = match cli.command {
        Command::Region(_) => commands::region(&cfg)?,
        Command::Design(_) => commands::design(&cfg)?,
        Command::Rates(_) => commands::rates(&cfg)?,
        Command::Simulate(_) => commands::simulate(&cfg)?,
        Command::SweepPower(_) => commands::sweep_power(&cfg)?,
    };
    output::emit(cli.command.name(), &cfg, &table)
}

/// Entry point returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fdgain: {e}");
            e.exit_code()
        }
    }
}
