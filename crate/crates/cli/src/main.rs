mod cmd;
mod config;
mod manifest;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::cmd::{Failure, Outcome};

/// Geodesical families, hyperbolic lattices and foliated Ising states.
#[derive(Parser)]
#[command(name = "millefeuille", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a geodesical family.
    Family(cmd::family::FamilyArgs),
    /// Run a Gibbs-sampling experiment and write a statistics CSV.
    Ising(cmd::ising::IsingArgs),
    /// Cover a Cayley tree by chains and bound the contour ratio.
    Tree(cmd::tree::TreeArgs),
    /// Draw a family, graph, state or covering in the Poincaré disk.
    Render(render::RenderArgs),
}

const THREADS_VAR: &str = "MILLEFEUILLE_THREADS";

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(anyhow::anyhow!("{THREADS_VAR} = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(anyhow::anyhow!("cannot start {n} worker threads: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = init_threads().and_then(|()| match cli.command {
        Command::Family(a) => cmd::family::run(a),
        Command::Ising(a) => cmd::ising::run(a),
        Command::Tree(a) => cmd::tree::run(a),
        Command::Render(a) => render::run(a),
    });
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::BoundViolated(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
