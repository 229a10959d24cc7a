use std::io;
use std::process::ExitCode;

use clap::Parser;
use symnet::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    if let Some(threads) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("symnet: cannot start thread pool: {e}");
            return ExitCode::from(cli::exit::USAGE);
        }
    }
    let stdout = io::stdout();
    match cli::run(&args, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("symnet: {e}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}
