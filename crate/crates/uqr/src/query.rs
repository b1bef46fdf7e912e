//! `uqr query`: answer a query file.

use uqr_core::Query64;

use crate::format::print_answer;
use crate::indexes::{EngineChoice, IndexChoice, Indexes};
use crate::CliError;

/// One output line per query, numbered from 1.
pub fn run(
    indexes: &Indexes,
    queries: &[Query64],
    choice: IndexChoice,
    engine: EngineChoice,
) -> Result<String, CliError> {
    let mut out = String::new();
    for (i, q) in queries.iter().enumerate() {
        let hits = if indexes.points().is_empty() {
            // only thresholds parse against an empty point set
            Vec::new()
        } else {
            let kind = q.interval().kind();
            let (_, index) = indexes
                .for_query(choice, kind)
                .map_err(|e| CliError::Capability(format!("query {}: {e}", i + 1)))?;
            index
                .run(q, engine.engine())
                .map_err(|e| CliError::Capability(format!("query {}: {e}", i + 1)))?
                .hits
        };
        out.push_str(&print_answer(i + 1, q, &hits));
        out.push('\n');
    }
    Ok(out)
}
