use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use profscope::cli::{run_text, Command, Format, Overrides, EXIT_INVALID};

/// Subgroup spaces of profinite groups given as towers of finite groups.
#[derive(Parser, Debug)]
#[command(name = "profscope", version)]
struct Args {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,

    /// JSON run config.
    #[arg(long)]
    config: PathBuf,

    #[arg(long)]
    depth: Option<usize>,

    #[arg(long)]
    window: Option<usize>,

    /// Work in the space of normal subgroups.
    #[arg(long)]
    normal: bool,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Largest level order; also bounds subgroup enumeration.
    #[arg(long)]
    budget: Option<usize>,

    /// Seed for sampled associativity checks on large tables.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let overrides = Overrides {
        command: Some(args.command),
        depth: args.depth,
        window: args.window,
        normal: args.normal,
        format: args.format,
        budget: args.budget,
        seed: args.seed,
    };
    let out = run_text(&text, &overrides);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
