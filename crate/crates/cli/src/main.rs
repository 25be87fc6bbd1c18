mod commands;
mod envelope;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::envelope::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "staircase",
    version,
    about = "Consecutive-run representations and staircase partitions"
)]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Leave `timing_ms` out of the JSON envelope.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every run of consecutive positive integers summing to N.
    Runs {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        total: u64,
    },
    /// Split 1..n into blocks summing to a, a+1, ..., b.
    Partition {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        a: u64,
        b: u64,
        /// Print every layer of the construction.
        #[arg(long)]
        trace: bool,
    },
    /// Count all such partitions by exhaustive search.
    Count {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        a: u64,
        b: u64,
        /// Also print the partitions.
        #[arg(long)]
        list: bool,
        /// Print at most this many partitions.
        #[arg(long)]
        limit: Option<usize>,
        /// Search past the ENUM_HARD_LIMIT prefix length.
        #[arg(long)]
        force: bool,
        /// Split the search across threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Draw the staircase tableau, and the rebuilt one when a and b are given.
    Render {
        n: u64,
        #[arg(requires = "b")]
        a: Option<u64>,
        b: Option<u64>,
    },
    /// Run the property sweeps up to the given prefix length.
    Selftest {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match commands::dispatch(&cli.command) {
        Ok(out) => out,
        Err(failure) => return report(failure),
    };
    let code = out.exit_code();
    if cli.json {
        println!("{}", out.to_json(!cli.no_timing));
    } else {
        print!("{}", out.text);
    }
    if let Some(message) = &out.defect {
        eprintln!("error: {message}");
    }
    ExitCode::from(code)
}

fn report(failure: Failure) -> ExitCode {
    eprintln!("error: {}", failure.message);
    ExitCode::from(failure.code)
}
