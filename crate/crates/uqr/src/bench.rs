//! `uqr bench`: build and query timings plus mean operation counters, one CSV
//! row per (case, n, parameter, engine).
//!
//! `comparisons` is the mean of key comparisons plus stream element
//! accesses per query; `bridge_steps` and `reported` are means too.

use std::fmt::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uqr_core::{gen, Counters, Engine, Query64, QueryInterval64, UncertainPoint64};

use crate::indexes::{IndexChoice, Indexes};
use crate::CliError;

pub const HEADER: &str =
    "case,n,param,engine,build_ms,query_us_p50,comparisons,bridge_steps,reported";

/// Generator spec: `rand-uniform:n` or `rand-hist:n:c` (`c` finite pieces).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSpec {
    Uniform { n: usize },
    Histogram { n: usize, pieces: usize },
}

impl GenSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::Input(format!(
                "bad generator spec `{s}` (expected rand-uniform:N or rand-hist:N:C)"
            ))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<usize>().ok().filter(|v| *v > 0).ok_or_else(bad);
        match parts.as_slice() {
            ["rand-uniform", n] => Ok(Self::Uniform { n: num(n)? }),
            ["rand-hist", n, c] => {
                let pieces = num(c)?;
                if pieces + 2 > uqr_core::model::DEFAULT_MAX_PIECES {
                    return Err(bad());
                }
                Ok(Self::Histogram { n: num(n)?, pieces })
            }
            _ => Err(bad()),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::Uniform { n } | Self::Histogram { n, .. } => n,
        }
    }

    pub fn with_n(self, n: usize) -> Self {
        match self {
            Self::Uniform { .. } => Self::Uniform { n },
            Self::Histogram { pieces, .. } => Self::Histogram { n, pieces },
        }
    }

    pub fn generate(&self, seed: u64) -> Vec<UncertainPoint64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match *self {
            Self::Uniform { n } => gen::uniform_points(&mut rng, n, None),
            Self::Histogram { n, pieces } => gen::histogram_points(&mut rng, n, pieces, None),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ks: Vec<usize>,
    pub taus: Vec<f64>,
    pub engines: Vec<Engine>,
    /// Queries per row.
    pub count: usize,
    pub seed: u64,
    /// Off: timing columns print as 0 so output depends on the seed only.
    pub timing: bool,
}

fn median_us(mut t: Vec<f64>) -> f64 {
    if t.is_empty() {
        return 0.0;
    }
    t.sort_by(f64::total_cmp);
    t[t.len() / 2]
}

struct Row<'a> {
    case: String,
    n: usize,
    param: String,
    engine: &'a str,
    build_ms: f64,
    times: Vec<f64>,
    sum: Counters,
    count: usize,
}

fn push_row(out: &mut String, row: Row<'_>, timing: bool) {
    let q = row.count.max(1) as f64;
    let (b, p) = if timing {
        (row.build_ms, median_us(row.times))
    } else {
        (0.0, 0.0)
    };
    writeln!(
        out,
        "{},{},{},{},{:.3},{:.3},{:.1},{:.1},{:.1}",
        row.case,
        row.n,
        row.param,
        row.engine,
        b,
        p,
        (row.sum.comparisons + row.sum.accesses) as f64 / q,
        row.sum.bridge_steps as f64 / q,
        row.sum.reported as f64 / q,
    )
    .unwrap();
}

fn intervals(
    points: &[UncertainPoint64],
    bounded: bool,
    count: usize,
    seed: u64,
) -> Vec<QueryInterval64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            if bounded {
                gen::bounded_interval(&mut rng, points)
            } else {
                gen::unbounded_interval(&mut rng, points)
            }
        })
        .collect()
}

/// Rows for one point set, without the header.
pub fn rows(points: Vec<UncertainPoint64>, cfg: &BenchConfig) -> Result<String, CliError> {
    let n = points.len();
    let indexes = Indexes::new(points);
    let cases: &[IndexChoice] = if indexes.all_uniform() {
        &IndexChoice::CONCRETE
    } else {
        &IndexChoice::CONCRETE[2..]
    };
    let mut out = String::new();
    for &case in cases {
        let start = Instant::now();
        let index = indexes
            .get(case)
            .map_err(|e| CliError::Capability(e.to_string()))?;
        let build_ms = start.elapsed().as_secs_f64() * 1e3;
        let bounded = matches!(case, IndexChoice::Ub | IndexChoice::Hb);
        let ivs = intervals(indexes.points(), bounded, cfg.count, cfg.seed ^ n as u64);
        let mut measure =
            |case_name: String,
             param: String,
             engine: &str,
             make: &dyn Fn(QueryInterval64) -> (Query64, Engine)| {
                let mut times = Vec::with_capacity(ivs.len());
                let mut sum = Counters::default();
                for &i in &ivs {
                    let (q, e) = make(i);
                    let t = Instant::now();
                    let r = index
                        .run(&q, e)
                        .map_err(|e| CliError::Capability(e.to_string()))?;
                    times.push(t.elapsed().as_secs_f64() * 1e6);
                    sum += r.counters;
                }
                push_row(
                    &mut out,
                    Row {
                        case: case_name,
                        n,
                        param,
                        engine,
                        build_ms,
                        times,
                        sum,
                        count: ivs.len(),
                    },
                    cfg.timing,
                );
                Ok::<(), CliError>(())
            };
        for &k in cfg.ks.iter().filter(|&&k| k >= 1 && k <= n) {
            for &e in &cfg.engines {
                measure(
                    format!("{case}-topk"),
                    k.to_string(),
                    &e.to_string(),
                    &|i| (Query64::TopK(i, k), e),
                )?;
            }
        }
        for &tau in &cfg.taus {
            measure(format!("{case}-thresh"), tau.to_string(), "-", &|i| {
                (Query64::Threshold(i, tau), Engine::Select)
            })?;
        }
    }
    Ok(out)
}

/// A seed per generated size, so each size is reproducible on its own.
pub fn size_seed(seed: u64, n: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.gen::<u64>() ^ n as u64
}
