//! Line-oriented text formats for points, queries and answers.
//!
//! Points: `id u lo hi` or `id h b_1 .. b_m | d_1 .. d_{m-1}`. Queries:
//! `top1 LO HI`, `topk LO HI K`, `thresh LO HI TAU`, with `-inf`/`+inf`
//! allowed as endpoints. `#` starts a comment; blank lines are skipped.

use std::fmt::{self, Write};

use uqr_core::{Hit64, Pdf, Query64, QueryInterval64, UncertainPoint64};

/// A malformed record, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Non-empty records as `(line number, tokens)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn real(tok: &str) -> Result<f64, String> {
    match tok.parse::<f64>() {
        Ok(v) if !v.is_nan() => Ok(v),
        _ => Err(format!("`{tok}` is not a number")),
    }
}

fn finite(tok: &str) -> Result<f64, String> {
    real(tok).and_then(|v| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{tok}` is not finite"))
        }
    })
}

fn point(tokens: &[&str]) -> Result<UncertainPoint64, String> {
    let id: u64 = tokens[0]
        .parse()
        .map_err(|_| format!("`{}` is not a point id", tokens[0]))?;
    let kind = tokens.get(1).ok_or("missing pdf kind")?;
    let rest = &tokens[2..];
    let p = match *kind {
        "u" => {
            if rest.len() != 2 {
                return Err(format!(
                    "uniform record needs 2 values, found {}",
                    rest.len()
                ));
            }
            UncertainPoint64::uniform(id, finite(rest[0])?, finite(rest[1])?)
        }
        "h" => {
            let bar = rest
                .iter()
                .position(|t| *t == "|")
                .ok_or("histogram record needs `|` between breaks and densities")?;
            let breaks = rest[..bar]
                .iter()
                .map(|t| finite(t))
                .collect::<Result<_, _>>()?;
            let dens = rest[bar + 1..]
                .iter()
                .map(|t| finite(t))
                .collect::<Result<_, _>>()?;
            UncertainPoint64::histogram(id, breaks, dens)
        }
        other => return Err(format!("unknown pdf kind `{other}` (expected `u` or `h`)")),
    };
    p.map_err(|e| format!("point {id}: {e}"))
}

pub fn parse_points(text: &str) -> Result<Vec<UncertainPoint64>, ParseError> {
    let mut seen = std::collections::HashSet::new();
    records(text)
        .map(|(line, tokens)| {
            let p = point(&tokens).map_err(|message| ParseError { line, message })?;
            if !seen.insert(p.id) {
                return Err(ParseError {
                    line,
                    message: format!("duplicate point id {}", p.id),
                });
            }
            Ok(p)
        })
        .collect()
}

/// Canonical text of a point set: one record per line, shortest round-trip
/// decimals.
pub fn print_points(points: &[UncertainPoint64]) -> String {
    let mut out = String::new();
    for p in points {
        match p.pdf() {
            Pdf::Uniform(u) => writeln!(out, "{} u {} {}", p.id, u.lo, u.hi),
            Pdf::Histogram(h) => {
                let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
                writeln!(
                    out,
                    "{} h {} | {}",
                    p.id,
                    join(h.breaks()),
                    join(h.densities())
                )
            }
        }
        .unwrap();
    }
    out
}

fn query(tokens: &[&str], n: usize) -> Result<Query64, String> {
    let arity = match tokens[0] {
        "top1" => 3,
        "topk" | "thresh" => 4,
        other => return Err(format!("unknown query `{other}`")),
    };
    if tokens.len() != arity {
        return Err(format!(
            "`{}` takes {} arguments, found {}",
            tokens[0],
            arity - 1,
            tokens.len() - 1
        ));
    }
    let interval =
        QueryInterval64::new(real(tokens[1])?, real(tokens[2])?).map_err(|e| e.to_string())?;
    match tokens[0] {
        "top1" => {
            if n == 0 {
                return Err("top1 on an empty point set".into());
            }
            Ok(Query64::Top1(interval))
        }
        "topk" => {
            let k: usize = tokens[3]
                .parse()
                .map_err(|_| format!("`{}` is not a count", tokens[3]))?;
            if k == 0 || k > n {
                return Err(format!("k = {k} is outside 1..={n}"));
            }
            Ok(Query64::TopK(interval, k))
        }
        _ => {
            let tau = real(tokens[3])?;
            if !(0.0..=1.0).contains(&tau) {
                return Err(format!("threshold {tau} is outside [0, 1]"));
            }
            Ok(Query64::Threshold(interval, tau))
        }
    }
}

/// Parses a query file against a point set of size `n`.
pub fn parse_queries(text: &str, n: usize) -> Result<Vec<Query64>, ParseError> {
    records(text)
        .map(|(line, tokens)| query(&tokens, n).map_err(|message| ParseError { line, message }))
        .collect()
}

fn endpoint(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else {
        v.to_string()
    }
}

/// The query as a query-file line.
pub fn print_query(q: &Query64) -> String {
    let i = q.interval();
    let head = format!("{} {} {}", q.kind_name(), endpoint(i.lo), endpoint(i.hi));
    match q {
        Query64::Top1(_) => head,
        Query64::TopK(_, k) => format!("{head} {k}"),
        Query64::Threshold(_, t) => format!("{head} {t}"),
    }
}

/// `QID kind m id:prob ..`, probabilities to 9 decimals.
pub fn print_answer(qid: usize, q: &Query64, hits: &[Hit64]) -> String {
    let mut out = format!("{qid} {} {}", q.kind_name(), hits.len());
    for h in hits {
        write!(out, " {}:{:.9}", h.id, h.prob).unwrap();
    }
    out
}
