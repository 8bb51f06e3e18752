use clap::Parser;
use netsvd_cli::args::{Cli, Command};
use netsvd_cli::commands;

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::run_simulate(args),
        Command::Fit(args) => commands::run_fit(args),
        Command::Evaluate(args) => commands::run_evaluate(args),
        Command::Replay(args) => commands::run_replay(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
