//! Canonical CSV output. Two files, fixed headers, UTF-8, rows in
//! (function order, sample order): re-running with the same config and
//! seed reproduces both files byte for byte.
//!
//! `samples.csv` carries the *clipped* bound ends. Its `preconditions_met`
//! column is true only when the row's relevance interval and coverage
//! interval are both proven (a heuristic coverage envelope does not
//! count), so every true row satisfies `rel_lo ≤ chi ≤ rel_hi` and
//! `cov_lo ≤ delta ≤ cov_hi` for that function's coverage metric.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{io_err, Result};
use crate::experiment::{CorrelationTable, FunctionRun};

pub const SAMPLES_HEADER: &str =
    "function,eta,smi_value,chi,delta_q,delta_tma,rel_lo,rel_hi,cov_lo,cov_hi,preconditions_met";
pub const CORRELATIONS_HEADER: &str = "dataset,function,eta,metric,spearman";

fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Render `samples.csv` content.
pub fn samples_csv(runs: &[FunctionRun]) -> String {
    let mut out = String::from(SAMPLES_HEADER);
    out.push('\n');
    for run in runs {
        for ((record, relevance), coverage) in run
            .records
            .iter()
            .zip(&run.relevance)
            .zip(&run.coverage)
        {
            let met = relevance.preconditions_met
                && coverage.preconditions_met
                && !coverage.heuristic;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                run.cfg.function,
                run.cfg.eta,
                record.smi_value,
                record.chi,
                record.delta_avg_q,
                fmt_opt(record.delta_avg_t_minus_a),
                relevance.clipped_lower,
                relevance.clipped_upper,
                coverage.clipped_lower,
                coverage.clipped_upper,
                met,
            ));
        }
    }
    out
}

/// Render `correlations.csv` content.
pub fn correlations_csv(table: &CorrelationTable) -> String {
    let mut out = String::from(CORRELATIONS_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.dataset, row.function, row.eta, row.metric, row.spearman
        ));
    }
    out
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(io_err(path))?;
    file.write_all(content.as_bytes()).map_err(io_err(path))?;
    Ok(())
}

/// Write `samples.csv` and `correlations.csv` under `dir`.
pub fn emit_csv(
    runs: &[FunctionRun],
    table: &CorrelationTable,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let samples_path = dir.join("samples.csv");
    write_file(&samples_path, &samples_csv(runs))?;
    let correlations_path = dir.join("correlations.csv");
    write_file(&correlations_path, &correlations_csv(table))?;
    Ok(vec![samples_path, correlations_path])
}

/// Write only `correlations.csv` (used by the sweep subcommand).
pub fn emit_correlations_csv(table: &CorrelationTable, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("correlations.csv");
    write_file(&path, &correlations_csv(table))?;
    Ok(path)
}
