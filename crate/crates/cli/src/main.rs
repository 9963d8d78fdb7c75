use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multifluid::integrator::Scheme;
use multifluid::io::driver::{convergence_base, convergence_table};
use multifluid::io::{convergence, parse_config, reference, run};
use multifluid::problems::CATALOG;
use multifluid::{Error, ExecPolicy};

#[derive(Parser)]
#[command(name = "multifluid", version, about = "Central-upwind solvers for stiffened-gas multifluids")]
struct Cli {
    /// Assemble fluxes on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured problem to its final time.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// pccu, ldpccu or aiweno.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long, requires = "nx")]
        ny: Option<usize>,
    },
    /// Print the benchmark problem names.
    ListProblems,
    /// Fine-mesh PCCU run of a 1-D problem.
    Reference {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L1 errors and observed orders on successively halved meshes.
    Convergence {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value = "aiweno")]
        scheme: String,
        /// Coarsest mesh; defaults to 50 for aiweno and 100 otherwise.
        #[arg(long)]
        base: Option<usize>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::UnknownProblem { .. } | Error::InvalidFluid { .. } => 2,
        Error::SolverAbort { .. } | Error::InvalidState { .. } => 3,
        Error::Io { .. } | Error::Format { .. } | Error::IncompatibleGrids(_) => 1,
    }
}

fn scheme_arg(s: &str) -> Result<Scheme, Error> {
    Scheme::parse(s).ok_or_else(|| Error::Config {
        line: 0,
        message: format!("unknown scheme `{s}` (pccu, ldpccu, aiweno)"),
    })
}

fn execute(cli: Cli) -> Result<(), Error> {
    let policy = if cli.sequential { ExecPolicy::Sequential } else { ExecPolicy::default() };
    match cli.command {
        Command::Run { config, out, scheme, nx, ny } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::Io { path: config.clone(), source: e })?;
            let mut cfg = parse_config(&text)?;
            if let Some(dir) = out {
                cfg.out = dir;
            }
            if let Some(s) = scheme {
                cfg.scheme = scheme_arg(&s)?;
            }
            cfg.nx = nx.or(cfg.nx);
            cfg.ny = ny.or(cfg.ny);
            let r = run(&cfg, policy)?;
            println!(
                "{} steps to t = {}, {} snapshots, manifest {}",
                r.steps,
                r.final_time,
                r.snapshots.len(),
                r.manifest.display()
            );
        }
        Command::ListProblems => {
            for name in CATALOG {
                println!("{name}");
            }
        }
        Command::Reference { problem, out } => {
            let out = out.unwrap_or_else(|| PathBuf::from("reference").join(&problem));
            let r = reference(&problem, &out, policy)?;
            println!("{} steps, manifest {}", r.steps, r.manifest.display());
        }
        Command::Convergence { problem, levels, scheme, base } => {
            let scheme = scheme_arg(&scheme)?;
            let base = base.unwrap_or_else(|| convergence_base(scheme));
            let rows = convergence(&problem, scheme, base, levels, policy)?;
            print!("{}", convergence_table(&rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
