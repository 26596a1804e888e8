use clap::Parser;
use gbrs::cli::{run, CliArgs};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("GBRS_LOG")).init();
    let args = CliArgs::parse();
    if let Err(err) = run(args) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
