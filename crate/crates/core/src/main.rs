use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ringlab::cache::{default_cache_path, ResultCache};
use ringlab::catalog::{default_catalog, load_catalog_file};
use ringlab::report::{run_classify, run_decompose, run_hunt, run_verify, Format, RunReport};
use ringlab::{Error, Suite};

#[derive(Parser)]
#[command(
    name = "ringlab",
    version,
    about = "Exhaustive witnesses for regularity and cancellation in small finite rings"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format: table, json or csv.
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    /// Result cache file (default: $RINGLAB_CACHE or ~/.cache/ringlab/cache.json).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Profile a ring: units, idempotents, SSP, SIP, IC, SR1 and more.
    Classify {
        #[arg(long)]
        ring: String,
    },
    /// Build an idempotent e with a + eb a unit and aR ⊕ eR = R.
    Decompose {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        element: String,
        /// Defaults to -1, giving a special clean decomposition.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Run equivalence suites over a ring catalog.
    Verify {
        /// T2.4, T2.9, C2.10, R2.5, C2.6, L2.3 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// JSON catalog file (default: built-in catalog).
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// List rings matching an expression over ssp, sip, ic, sr1, abelian.
    Hunt {
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
    },
}

fn run(cli: Cli) -> Result<RunReport, Error> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if let Some(jobs) = cli.common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let mut cache = if cli.common.no_cache {
        ResultCache::disabled()
    } else {
        match cli.common.cache.clone().or_else(default_cache_path) {
            Some(p) => ResultCache::open(p),
            None => ResultCache::disabled(),
        }
    };
    let report = match &cli.command {
        Command::Classify { ring } => run_classify(&argv, ring, &mut cache)?,
        Command::Decompose { ring, element, b } => {
            run_decompose(&argv, ring, element, b.as_deref(), &mut cache)?
        }
        Command::Verify { suite, catalog } => {
            let suites = Suite::parse_list(suite)?;
            let catalog = match catalog {
                Some(p) => load_catalog_file(p)?,
                None => default_catalog(),
            };
            run_verify(&argv, &suites, &catalog, &mut cache)?
        }
        Command::Hunt { property, max_size } => run_hunt(&argv, property, *max_size)?,
    };
    if let Err(e) = cache.save() {
        eprintln!("warning: could not write cache: {e}");
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.common.format;
    match run(cli).and_then(|r| Ok((r.render(format)?, r.passed))) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
