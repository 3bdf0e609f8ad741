//! Thin command-line front end; all analysis lives in the library.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when redundant methods
//! disagree.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use obsgraph::cli::{self, Command, Format, RunConfig, Tolerances};
use obsgraph::error::Error;

#[derive(Parser)]
#[command(
    name = "obsgraph",
    version,
    about = "Observability analysis of the discrete Schrödinger flow on graphs, periodic integer sets, and discrete tori"
)]
struct CliArgs {
    /// Load a full run configuration (JSON); mutually exclusive with a
    /// subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for randomized checks; recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; csv applies to sweep subcommands.
    #[arg(long, global = true, default_value = "json")]
    format: String,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand)]
enum Sub {
    /// Observability of a vertex set on a finite graph (Gramian constant
    /// cross-checked against the eigenvector restriction test).
    Observability {
        /// Graph descriptor: path:N, cycle:N, complete:N, torus:N,d, or @file.json.
        #[arg(long)]
        graph: String,
        /// Set descriptor: "{i,j}", "r mod p", "{r1,r2} mod p", or complement(...).
        #[arg(long)]
        set: String,
        /// Time horizon T.
        #[arg(long)]
        time: f64,
    },
    /// Periodic integer sets: arithmetic criterion plus the fiber sweep.
    Bohr {
        #[arg(long)]
        p: u64,
        /// Comma-separated residues, e.g. 0,1.
        #[arg(long, value_delimiter = ',')]
        residues: Vec<u64>,
        #[arg(long)]
        time: f64,
        /// Fiber grid size (the degenerate fibers are always included).
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Product construction of high-density unobservable sets on a torus.
    Torus(TorusArgs),
    /// Thickness and window-density profiles of an integer set.
    Density {
        /// Integer-set descriptor: "{r} mod p", rotation(a,g), mixed(q,a), window{..}.
        #[arg(long)]
        set: String,
        /// Half-windows, e.g. 1..64 or 1,2,4.
        #[arg(long = "L", default_value = "")]
        half_windows: String,
        /// Window radii, e.g. 1e3,1e4,1e5.
        #[arg(long = "R", default_value = "")]
        radii: String,
    },
    /// Quadrature check of the quantitative unobservability bound for even
    /// residue classes.
    Counterexample {
        #[arg(long)]
        p: u64,
        /// Bump half-width; accepts pi/k shorthand.
        #[arg(long, value_parser = cli::parse_real)]
        delta: f64,
        /// Evolution time; accepts pi/k shorthand.
        #[arg(long, value_parser = cli::parse_real)]
        t: f64,
        /// Quadrature panels (≥ 4096).
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Resolvent-style certificate swept over a spectral grid.
    Hautus {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        set: String,
        /// Weight on the resolvent term.
        #[arg(long, default_value_t = 1.0)]
        weight_state: f64,
        /// Weight on the observation term.
        #[arg(long, default_value_t = 1.0)]
        weight_obs: f64,
        /// Grid points (eigenvalues are always merged in).
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Batch cross-validation: randomized method agreement, the exhaustive
    /// periodic-set battery, and the fiber/cycle oracle.
    OracleSuite {
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
}

#[derive(Args)]
struct TorusArgs {
    #[arg(long = "N")]
    n_side: u64,
    #[arg(long = "d")]
    dim: usize,
    /// Construction name; available: product.
    #[arg(long, default_value = "product")]
    construct: String,
}

/// Accepts "a..b" ranges, comma lists, scientific notation, or nothing.
fn parse_i64_list(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start {lo:?}"))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end {hi:?}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>().or_else(|_| {
                t.parse::<f64>()
                    .map(|f| f.round() as i64)
                    .map_err(|_| format!("bad integer {t:?}"))
            })
        })
        .collect()
}

fn to_command(sub: Sub) -> Result<Command, Error> {
    Ok(match sub {
        Sub::Observability { graph, set, time } => Command::Observability { graph, set, time },
        Sub::Bohr {
            p,
            residues,
            time,
            grid,
        } => Command::Bohr {
            p,
            residues,
            time,
            grid,
        },
        Sub::Torus(t) => Command::Torus {
            n_side: t.n_side,
            dim: t.dim,
            construct: t.construct,
        },
        Sub::Density {
            set,
            half_windows,
            radii,
        } => Command::Density {
            set,
            half_windows: parse_i64_list(&half_windows).map_err(Error::InvalidInput)?,
            radii: parse_i64_list(&radii).map_err(Error::InvalidInput)?,
        },
        Sub::Counterexample { p, delta, t, grid } => Command::Counterexample { p, delta, t, grid },
        Sub::Hautus {
            graph,
            set,
            weight_state,
            weight_obs,
            grid,
        } => Command::Hautus {
            graph,
            set,
            weight_state,
            weight_obs,
            grid,
        },
        Sub::OracleSuite { instances } => Command::OracleSuite { instances },
    })
}

fn build_config(args: CliArgs) -> Result<RunConfig, Error> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        return RunConfig::from_json(&text);
    }
    let command = args
        .command
        .map(to_command)
        .transpose()?
        .ok_or_else(|| Error::InvalidInput("need a subcommand or --config".into()))?;
    let format = match args.format.as_str() {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => return Err(Error::InvalidInput(format!("unknown format {other:?}"))),
    };
    Ok(RunConfig {
        command,
        seed: args.seed,
        tolerances: Tolerances::default(),
        format,
        out: args.out,
    })
}

fn main() -> ExitCode {
    cli::init_thread_pool_from_env();
    // Exit status 2 is reserved for method disagreements; usage errors map
    // to 1, help and version to 0.
    let args = match CliArgs::try_parse() {
        Ok(a) => a,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let config = match build_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match cli::run(&config) {
        Ok(outcome) => {
            let text = match &outcome.csv {
                Some(csv) => csv.clone(),
                None => outcome.report.to_json_pretty() + "\n",
            };
            match &config.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Error::Disagreement(msg)) => {
            eprintln!("disagreement: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
