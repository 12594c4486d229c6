//! `csd`: exact cyclic subgroup commutativity degrees from the command line.

mod cache;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use csd_core::density::DEFAULT_PRIME_HORIZON;
use csd_core::Limits;

use cache::Cache;
use commands::{ClassSelector, Context, DegreeKind, ScanKind};
use error::{CliError, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use report::{Format, Timing};

#[derive(Parser)]
#[command(name = "csd", version, about = "Exact (relative) cyclic subgroup commutativity degrees of finite groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print the report as JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print the report as CSV rows (spec, class, measure, value)
    #[arg(long, global = true)]
    csv: bool,
    /// Directory of the result cache; caching is off when unset
    #[arg(long, env = "CSD_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest group order any constructor will build
    #[arg(long = "max-order", env = "CSD_MAX_ORDER", default_value_t = Limits::default().max_order)]
    max_order: usize,
    /// Largest group order whose full subgroup lattice is enumerated
    #[arg(long, env = "CSD_MAX_LATTICE_ORDER", default_value_t = Limits::default().max_lattice_order, global = true)]
    max_lattice_order: usize,
    /// Worker threads for parallel evaluation (default: one per core)
    #[arg(long, env = "CSD_WORKERS", global = true)]
    workers: Option<usize>,
    /// Largest prime the density search may try
    #[arg(long, env = "CSD_PRIME_HORIZON", default_value_t = DEFAULT_PRIME_HORIZON, global = true)]
    prime_horizon: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Order, subgroup counts, gamma and the Iwasawa flag
    Info {
        #[arg(required = true)]
        specs: Vec<String>,
    },
    /// A degree of the whole group, or relative degrees per class of subgroups
    Degree {
        #[arg(value_enum)]
        kind: DegreeKind,
        #[arg(required = true)]
        specs: Vec<String>,
        /// `all` for one row per conjugacy class of subgroups, or a class id
        #[arg(long)]
        relative: Option<ClassSelector>,
    },
    /// Im f1, Im g1 and optionally Im f over the conjugacy classes of subgroups
    Spectrum {
        #[arg(required = true)]
        specs: Vec<String>,
        /// Also compute Im f (relative subgroup commutativity degrees)
        #[arg(long)]
        sd: bool,
    },
    /// Run a verification suite: quaternion-f1, quaternion-g1, two-groups, one-class, two-classes,
    /// bounds, criterion, spot-values, density, two-valued, formulas, or all
    Verify { suite: String },
    /// Density witnesses
    Density {
        #[command(subcommand)]
        command: DensityCommand,
    },
    /// Census over the built-in corpus
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        /// Largest group order in the corpus
        #[arg(long = "max-order", default_value_t = 64)]
        max_order: usize,
    },
}

#[derive(Subcommand)]
enum DensityCommand {
    /// A product of relative degrees within a tolerance of a/b
    Approach {
        /// Target a/b with 0 <= a <= b
        target: String,
        #[arg(long)]
        tol: String,
        /// Also build the concrete groups and compare by enumeration
        #[arg(long)]
        oracle: bool,
    },
    /// csd(Q_{2^n}) for n = 3..=max-n
    Qtail {
        #[arg(long = "max-n")]
        max_n: u32,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let g = cli.global;
    if let Some(n) = g.workers {
        if n == 0 {
            return Err(CliError::Input("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let format = match (g.json, g.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => Format::Human,
    };
    let mut ctx = Context {
        limits: Limits {
            max_order: g.max_order,
            max_lattice_order: g.max_lattice_order,
        },
        prime_horizon: g.prime_horizon,
        cache: Cache::new(g.cache_dir),
    };
    let output = match cli.command {
        Command::Info { specs } => commands::info(&mut ctx, &specs)?,
        Command::Degree { kind, specs, relative } => commands::degree(&mut ctx, kind, &specs, relative)?,
        Command::Spectrum { specs, sd } => commands::spectrum(&mut ctx, &specs, sd)?,
        Command::Verify { suite } => commands::verify(&mut ctx, &suite)?,
        Command::Density { command } => match command {
            DensityCommand::Approach { target, tol, oracle } => {
                commands::density_approach(&mut ctx, &target, &tol, oracle)?
            }
            DensityCommand::Qtail { max_n } => commands::density_qtail(max_n)?,
        },
        Command::Scan { kind, max_order } => commands::scan(&mut ctx, kind, max_order)?,
    };
    let timing = Timing {
        elapsed_ms: start.elapsed().as_millis() as u64,
        cache: ctx.cache.stats().map(Into::into),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    output.write(format, timing, &mut out)?;
    out.flush()?;
    Ok(if output.failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { EXIT_OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
