use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pam_ed::cli::{self, Overrides};
use pam_ed::config::{RunConfig, Task};

#[derive(Parser)]
#[command(name = "pam-ed", version, about = "Exact diagonalization of the symmetric periodic Anderson model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks listed in the config
    Run(Common),
    /// Report configuration problems without running anything
    Validate(Common),
    /// Run only the epsilon sweep
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            output_dir: self.output_dir.clone(),
            seed: self.seed,
            threads: self.threads,
        }
    }
}

fn main() -> ExitCode {
    let (args, only) = match Cli::parse().command {
        Command::Validate(args) => return validate(&args),
        Command::Run(args) => (args, None),
        Command::Sweep(args) => (args, Some(vec![Task::Sweep])),
    };
    let report = cli::run_file(&args.config, &args.overrides(), only);
    print!("{}", cli::summary(&report));
    ExitCode::from(report.exit_code as u8)
}

fn validate(args: &Common) -> ExitCode {
    let mut config = match RunConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
    };
    args.overrides().apply(&mut config);
    let diagnostics = config.validate();
    for d in &diagnostics {
        println!("{d}");
    }
    if diagnostics.is_empty() {
        println!("ok");
        ExitCode::SUCCESS
    } else {
        ExitCode::from(cli::EXIT_CONFIG as u8)
    }
}
