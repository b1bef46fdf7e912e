use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uqr::bench::{self, BenchConfig, GenSpec};
use uqr::format::{parse_points, parse_queries};
use uqr::{query, validate, CliError, EngineChoice, IndexChoice, Indexes};
use uqr_core::{Engine, UncertainPoint64};

#[derive(Parser)]
#[command(
    name = "uqr",
    version,
    about = "Top-1, top-k and threshold range queries over uncertain points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Answer every query of a query file.
    Query {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexChoice::Auto)]
        index: IndexChoice,
        #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
        engine: EngineChoice,
        #[command(flatten)]
        output: Output,
    },
    /// Compare every applicable index and engine with the brute-force oracle
    /// on random queries.
    Validate {
        #[arg(long)]
        points: PathBuf,
        /// Queries per query kind.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Timings and operation counters as CSV.
    Bench {
        #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
        points: Option<PathBuf>,
        /// `rand-uniform:N` or `rand-hist:N:C`.
        #[arg(long)]
        gen: Option<String>,
        /// Sizes to sweep, overriding the generator's `N`.
        #[arg(long, value_delimiter = ',', requires = "gen")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,16,64")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        tau: Vec<f64>,
        /// Top-k engines; `auto` runs all three.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "auto")]
        engine: Vec<EngineChoice>,
        /// Queries per row.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print zeros in the timing columns.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(&path.display().to_string(), e))
}

fn load_points(path: &Path) -> Result<Vec<UncertainPoint64>, CliError> {
    parse_points(&read(path)?).map_err(|e| CliError::input(&path.display().to_string(), e))
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::input(&p.display().to_string(), e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn engines(choices: &[EngineChoice]) -> Vec<Engine> {
    let mut out = Vec::new();
    for c in choices {
        let add: &[Engine] = match c {
            EngineChoice::Auto => &Engine::ALL,
            _ => &[c.engine()][..],
        };
        for e in add {
            if !out.contains(e) {
                out.push(*e);
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Query {
            points,
            queries,
            index,
            engine,
            output,
        } => {
            let pts = load_points(&points)?;
            let qs = parse_queries(&read(&queries)?, pts.len())
                .map_err(|e| CliError::input(&queries.display().to_string(), e))?;
            let text = query::run(&Indexes::new(pts), &qs, index, engine)?;
            emit(&output, &text)
        }
        Command::Validate {
            points,
            count,
            seed,
            output,
        } => {
            let report = validate::run(&Indexes::new(load_points(&points)?), count, seed);
            emit(&output, &report.text)?;
            match report.mismatches {
                0 => Ok(()),
                m => Err(CliError::Mismatch(m)),
            }
        }
        Command::Bench {
            points,
            gen,
            n,
            k,
            tau,
            engine,
            count,
            seed,
            no_timing,
            output,
        } => {
            if let Some(t) = tau.iter().find(|t| !(0.0..=1.0).contains(*t)) {
                return Err(CliError::Input(format!("threshold {t} is outside [0, 1]")));
            }
            let cfg = BenchConfig {
                ks: k,
                taus: tau,
                engines: engines(&engine),
                count,
                seed,
                timing: !no_timing,
            };
            let mut text = format!("{}\n", bench::HEADER);
            match (points, gen) {
                (Some(path), _) => text += &bench::rows(load_points(&path)?, &cfg)?,
                (None, Some(spec)) => {
                    let spec = GenSpec::parse(&spec)?;
                    let sizes = if n.is_empty() { vec![spec.n()] } else { n };
                    for size in sizes {
                        if size == 0 {
                            return Err(CliError::Input("sizes must be positive".into()));
                        }
                        let pts = spec.with_n(size).generate(bench::size_seed(seed, size));
                        text += &bench::rows(pts, &cfg)?;
                    }
                }
                (None, None) => unreachable!("clap requires --points or --gen"),
            }
            emit(&output, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("uqr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
