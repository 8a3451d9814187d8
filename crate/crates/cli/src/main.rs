use clap::{Parser, Subcommand};
use movoid_cli::commands::{self, Ctx, SearchArgs};
use movoid_cli::{CliError, Format};
use movoid_core::quadric::Caps;
use std::path::PathBuf;
use std::process::ExitCode;

/// m-ovoids of elliptic quadrics Q^-(2r+1, q): admissibility tables,
/// constructions by field reduction, certificate verification, exhaustive
/// search and line statistics.
#[derive(Parser)]
#[command(name = "movoid", version)]
struct Cli {
    /// Output format (text is human oriented; json and csv are stable)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on quadric point counts
    #[arg(long, global = true, default_value_t = 5_000)]
    max_points: u128,
    /// Cap on enumerated generators / singular lines
    #[arg(long, global = true, default_value_t = 100_000)]
    max_generators: u64,
    /// Worker threads for search (default: available parallelism; 1 forces serial)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Admissibility table over ranges of q and r
    Table {
        /// field order or inclusive range, e.g. 3 or 2..5
        #[arg(long)]
        q: String,
        /// rank or inclusive range, e.g. 3 or 2..3
        #[arg(long)]
        r: String,
    },
    /// Build a quadric and report its sizes
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        /// write the trivial all-points ovoid certificate here
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Verify a certificate file from scratch
    Verify { path: PathBuf },
    /// Field reduction: an m-ovoid of Q^-(2r+1, q^e) becomes an ovoid of a
    /// larger quadric over GF(q)
    Reduce {
        /// base field order of the target
        #[arg(long)]
        q: u64,
        /// extension degree
        #[arg(long)]
        e: u32,
        /// rank of the source quadric over GF(q^e)
        #[arg(long)]
        r: usize,
        /// source m-ovoid certificate (default: all points of the source)
        #[arg(long)]
        source: Option<PathBuf>,
        /// write the target certificate here (text mode prints it otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive pruned backtracking for m-ovoids or 1-systems
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        /// target m (m-ovoid mode)
        #[arg(long)]
        m: Option<i64>,
        /// search mode
        #[arg(long, default_value = "m-ovoid", value_parser = ["m-ovoid", "one-system"])]
        mode: String,
        #[arg(long)]
        node_limit: Option<u64>,
        /// wall-clock limit in seconds
        #[arg(long)]
        time_limit: Option<u64>,
        /// search even when m fails the admissibility filter
        #[arg(long)]
        force: bool,
        /// write the witness certificate here when found
        #[arg(long)]
        emit: Option<PathBuf>,
        /// certificate whose points (or lines) are forced into the solution
        #[arg(long)]
        seed: Option<PathBuf>,
        /// use only the first N seed points / lines
        #[arg(long)]
        seed_count: Option<usize>,
        /// disable the tangent-section pruning
        #[arg(long)]
        no_prune_tangent: bool,
        /// disable the generator-capacity and size pruning
        #[arg(long)]
        no_prune_capacity: bool,
    },
    /// Line statistics and intersection histograms of an ovoid certificate
    Stats {
        path: PathBuf,
        /// base point (canonical quadric point index); default: all ovoid points
        #[arg(long)]
        point: Option<u32>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let ctx = Ctx {
        format: cli.format,
        caps: Caps { max_points: cli.max_points, max_generators: cli.max_generators },
        threads: cli.threads.unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }),
    };
    let (out, code) = match cli.cmd {
        Cmd::Table { q, r } => (commands::cmd_table(&ctx, &q, &r)?, 0),
        Cmd::Build { q, r, emit } => (commands::cmd_build(&ctx, q, r, emit.as_deref())?, 0),
        Cmd::Verify { path } => (commands::cmd_verify(&ctx, &path)?, 0),
        Cmd::Reduce { q, e, r, source, out } => {
            (commands::cmd_reduce(&ctx, q, e, r, source.as_deref(), out.as_deref())?, 0)
        }
        Cmd::Search {
            q,
            r,
            m,
            mode,
            node_limit,
            time_limit,
            force,
            emit,
            seed,
            seed_count,
            no_prune_tangent,
            no_prune_capacity,
        } => {
            let args = SearchArgs {
                q,
                r,
                m,
                one_system: mode == "one-system",
                node_limit,
                time_limit,
                force,
                emit,
                seed,
                seed_count,
                prune_tangent: !no_prune_tangent,
                prune_capacity: !no_prune_capacity,
            };
            commands::cmd_search(&ctx, &args)?
        }
        Cmd::Stats { path, point } => (commands::cmd_stats(&ctx, &path, point)?, 0),
    };
    println!("{out}");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
