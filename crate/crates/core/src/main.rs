use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rplaces::cli::{Options, Session};

/// Exact computations with real places, cuts and balls over Hahn fields.
#[derive(Parser, Debug)]
#[command(name = "rplaces", version)]
struct Args {
    /// Emit one JSON object per command.
    #[arg(long)]
    json: bool,
    /// Seed for sampling commands and probes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on term-extraction steps for expansions.
    #[arg(long, default_value_t = rplaces::ordfield::DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Run a single command (repeatable); runs before SCRIPT.
    #[arg(short = 'e', long = "exec")]
    exec: Vec<String>,
    /// Script file, one command per line. Reads stdin when absent and no -e is given.
    script: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut session = Session::new(Options {
        json: args.json,
        seed: args.seed,
        max_steps: args.max_steps,
    });
    let mut script = args.exec.join("\n");
    match &args.script {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => {
                script.push('\n');
                script.push_str(&s);
            }
            Err(e) => {
                eprintln!("rplaces: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None if args.exec.is_empty() => {
            if let Err(e) = std::io::stdin().read_to_string(&mut script) {
                eprintln!("rplaces: stdin: {e}");
                return ExitCode::from(2);
            }
        }
        None => {}
    }
    let mut failed = false;
    for reply in session.run_script(&script) {
        failed |= !reply.is_ok();
        println!("{}", reply.render(args.json));
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
