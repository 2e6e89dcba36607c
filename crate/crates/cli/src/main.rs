use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fountain_cli::{run, Command, Overrides, ProblemKind, RunConfig};

/// Fountain-theorem numerics: geometry reports, minimax solves, degree demos
/// and deformation property checks.
#[derive(Debug, Parser)]
#[command(name = "fountain", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output_dir` from the config.
    #[arg(long, visible_alias = "output-dir")]
    out: Option<PathBuf>,
    /// Overrides `problem` from the config.
    #[arg(long, value_enum)]
    problem: Option<ProblemKind>,
    /// Overrides `k_range` from the config.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    k_range: Option<Vec<usize>>,
    /// Sets any config key, e.g. `--set params.modes=8` or
    /// `--set fountain.minimax.max_rounds=10`.
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        seed: args.seed,
        output_dir: args.out,
        problem: args.problem,
        k_range: args.k_range.map(|k| [k[0], k[1]]),
        set: args.set,
    };
    let outcome = RunConfig::from_path(args.command, &args.config, &overrides)
        .and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            print!("{}", o.summary);
            for d in &o.diagnostics {
                eprintln!("{d}");
            }
            ExitCode::from(o.status as u8)
        }
        Err(e) => {
            eprintln!("fountain: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
