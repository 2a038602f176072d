mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let cx = Ctx {
        timestamp: !cli.no_timestamp,
    };
    let result = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::CheckQr(a) => commands::check_qr(&cx, a),
        Command::CheckPair(a) => commands::check_pair_cmd(&cx, a),
        Command::Decompose(a) => commands::decompose(&cx, a),
        Command::Partition(a) => commands::partition(&cx, a),
        Command::Verify(a) => commands::verify(&cx, a),
        Command::Concentration(a) => commands::concentration(&cx, a),
        Command::Demo(a) => commands::demo(&cx, a),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
