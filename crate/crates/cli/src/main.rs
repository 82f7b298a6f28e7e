//! `twophoton`: run scenario files or built-in presets.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use twophoton::scenario::{load_config, preset, run, RunReport, PRESETS};

#[derive(Parser)]
#[command(name = "twophoton", version, about = "Two-photon imaging scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a named preset.
    Run(RunArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset to run instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Fail with a nonzero exit code when any validity check fails.
    #[arg(long)]
    strict: bool,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn summary(r: &RunReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let op = if c.at_least { ">=" } else { "<=" };
        s += &format!("  {:<36} {:>12.6e} {op} {:<10.3e} {:?}\n", c.name, c.value, c.threshold, c.status);
    }
    for o in &r.outputs {
        s += &format!("  wrote {}/{o}\n", r.config.output.directory);
    }
    s += &format!("  {:.2} s\n", r.wall_time_s);
    s
}

fn execute(args: RunArgs) -> twophoton::Result<RunReport> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(p), _) => load_config(p)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    cfg.strict |= args.strict;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if let Some(out) = args.out {
        cfg.output.directory = out.to_string_lossy().into_owned();
    }
    run(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets => {
            for (name, about) in PRESETS {
                println!("{name:<24} {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match execute(args) {
            Ok(report) => {
                print!("{}", summary(&report));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
