use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tailcalc::cli::{exit_code, run, Command, JobSpec, Mode};

/// Higher-order tail expansions for weighted sums, random sums and renewal equations.
#[derive(Parser, Debug)]
#[command(name = "tailcalc", version)]
struct Args {
    command: Command,
    /// Problem document (JSON).
    #[arg(long = "in")]
    input: PathBuf,
    /// Report path (JSON); a `.meta.json` sidecar is written next to it.
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long)]
    pretty: bool,
}

fn main() -> ExitCode {
    let a = Args::parse();
    let job = JobSpec { command: a.command, input: a.input, output: a.output, mode: a.mode, pretty: a.pretty };
    let r = run(&job);
    if let Err(e) = &r {
        eprintln!("tailcalc: {e}");
    }
    ExitCode::from(exit_code(&r) as u8)
}
