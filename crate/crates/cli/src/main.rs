use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use log::LevelFilter;
use wreathlab_core::{Caps, Error};

mod commands;
mod config;
mod output;
mod selftest;

use config::{CapOverrides, CAPS_ENV};
use output::{Format, Sink};

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_INVARIANT: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "wreathlab", version, about = "Exact computations on wreaths of k-subsets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads for parallel phases (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Omit the `meta` object so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Include the expensive cases and oracle columns.
    #[arg(long, global = true)]
    heavy: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// TOML file with the same keys as the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest n for which wreaths are enumerated.
    #[arg(long, global = true)]
    enumeration_cap: Option<u32>,
    /// Largest dense matrix dimension.
    #[arg(long, global = true)]
    matrix_cap: Option<usize>,
    /// Largest number of terms in a group-sum kernel vector.
    #[arg(long, global = true)]
    term_cap: Option<u64>,
    /// Largest explicit subgroup.
    #[arg(long, global = true)]
    subgroup_cap: Option<usize>,
    /// Largest wreath count whose spectrum is certified against the matrix.
    #[arg(long, global = true)]
    certify_cap: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct NK {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all wreaths and compare their number with the formula.
    Enumerate {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        count_only: bool,
    },
    /// The wreath matrix (CSV or JSON).
    Matrix {
        #[command(flatten)]
        nk: NK,
    },
    /// Eigenvalues with multiplicities, certified against the matrix when small.
    Spectrum {
        #[command(flatten)]
        nk: NK,
    },
    /// The b coefficients feeding the eigenvalue formula.
    BTable {
        #[command(flatten)]
        nk: NK,
    },
    /// Kernel dimension from the counting formula.
    KernelDim {
        #[command(flatten)]
        nk: NK,
        /// Also compute the nullspace size by exact elimination.
        #[arg(long)]
        exact: bool,
    },
    /// Explicit kernel vectors x_a and y_a.
    KernelVectors {
        #[command(flatten)]
        nk: NK,
        /// Number of base wreaths for y_a (1 = the identity wreath only).
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Report the rank of the constructed family.
        #[arg(long)]
        span: bool,
    },
    /// Exact rational basis of the kernel.
    Nullspace {
        #[command(flatten)]
        nk: NK,
    },
    /// Search for a partition of all k-subsets into disjoint wreaths.
    Decompose {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<u64>,
        /// Where to save the search state when a budget runs out.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from a saved search state.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Check a decomposition file and the equivalent kernel-vector conditions.
    Verify {
        #[command(flatten)]
        nk: NK,
        /// JSON file: a list of wreaths, or `decompose` output.
        #[arg(long)]
        input: PathBuf,
    },
    /// Ratio bound on disjoint wreath families; one pair or every pair up to --max-n.
    DhBound {
        #[arg(long, requires = "k")]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        k: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_n: u32,
    },
    /// Check whether the eigenvalues of each level are pairwise distinct.
    ScanDistinct {
        #[arg(long, default_value_t = 5)]
        n_min: u32,
        #[arg(long, default_value_t = 30)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        k_min: u32,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
    },
    /// Run the invariant checks over the built-in roster.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Matrix { .. } => "matrix",
            Command::Spectrum { .. } => "spectrum",
            Command::BTable { .. } => "b-table",
            Command::KernelDim { .. } => "kernel-dim",
            Command::KernelVectors { .. } => "kernel-vectors",
            Command::Nullspace { .. } => "nullspace",
            Command::Decompose { .. } => "decompose",
            Command::Verify { .. } => "verify",
            Command::DhBound { .. } => "dh-bound",
            Command::ScanDistinct { .. } => "scan-distinct",
            Command::Selftest => "selftest",
        }
    }
}

pub struct Ctx {
    pub caps: Caps,
    pub heavy: bool,
    pub sink: Sink,
}

fn resolve(global: &Global, command: &str) -> Result<(Ctx, Option<usize>)> {
    let mut caps = Caps::default();
    let mut heavy = global.heavy;
    let mut jobs = global.jobs;
    if let Some(path) = &global.config {
        let file = config::load_file(path)?;
        file.caps().apply(&mut caps);
        heavy |= file.heavy.unwrap_or(false);
        jobs = jobs.or(file.jobs);
    }
    if let Ok(text) = std::env::var(CAPS_ENV) {
        CapOverrides::parse_env(&text)?.apply(&mut caps);
    }
    CapOverrides {
        enumeration_cap: global.enumeration_cap,
        matrix_cap: global.matrix_cap,
        term_cap: global.term_cap,
        subgroup_cap: global.subgroup_cap,
        certify_cap: global.certify_cap,
    }
    .apply(&mut caps);
    config::validate(&caps)?;
    let sink = Sink {
        format: global.format,
        output: global.output.clone(),
        meta: !global.no_meta,
        command: command.to_string(),
    };
    Ok((Ctx { caps, heavy, sink }, jobs))
}

fn run(cli: Cli) -> Result<u8> {
    let (ctx, jobs) = resolve(&cli.global, cli.command.name()).map_err(Usage)?;
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    match cli.command {
        Command::Enumerate { nk, count_only } => commands::enumerate(&ctx, nk, count_only),
        Command::Matrix { nk } => commands::matrix(&ctx, nk),
        Command::Spectrum { nk } => commands::spectrum(&ctx, nk),
        Command::BTable { nk } => commands::b_table(&ctx, nk),
        Command::KernelDim { nk, exact } => commands::kernel_dim(&ctx, nk, exact),
        Command::KernelVectors { nk, samples, span } => commands::kernel_vectors(&ctx, nk, samples, span),
        Command::Nullspace { nk } => commands::nullspace(&ctx, nk),
        Command::Decompose {
            nk,
            node_budget,
            time_budget,
            checkpoint,
            resume,
        } => commands::decompose(&ctx, nk, node_budget, time_budget, checkpoint, resume),
        Command::Verify { nk, input } => commands::verify(&ctx, nk, &input),
        Command::DhBound { n, k, max_n } => commands::dh_bound(&ctx, n.zip(k), max_n),
        Command::ScanDistinct {
            n_min,
            n_max,
            k_min,
            k_max,
        } => commands::scan_distinct(&ctx, n_min..=n_max, k_min..=k_max),
        Command::Selftest => selftest::run(&ctx),
    }
}

/// Marks an error as a usage problem (exit code 2).
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::KernelCheckFailed(_) | Error::Invariant(_) | Error::Overflow,
        ) => EXIT_INVARIANT,
        Some(Error::Io(_)) => EXIT_FAILED,
        Some(_) => EXIT_USAGE,
        None => EXIT_FAILED,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
