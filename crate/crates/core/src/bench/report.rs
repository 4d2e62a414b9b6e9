//! Results CSV: `front,m,n,k,algo,strategy,run,seed,igd,time_ms`.
//!
//! IGD is written in scientific notation with at least four fractional
//! mantissa digits; both floating columns use the shortest representation
//! that parses back to the same value, so a written file reads back into
//! identical rows.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::bench::ResultRow;
use crate::error::{Error, Result};

pub const HEADER: [&str; 10] = [
    "front", "m", "n", "k", "algo", "strategy", "run", "seed", "igd", "time_ms",
];

/// Scientific notation with at least four fractional mantissa digits,
/// e.g. `4.6263e-2`, `5.0000e-1`.
pub fn format_igd(v: f64) -> String {
    let s = format!("{v:e}");
    let (mantissa, exponent) = s.split_once('e').expect("`{:e}` always has an exponent");
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    format!("{int}.{frac:0<4}e{exponent}")
}

pub fn write_results<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.front.clone(),
            r.m.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.algo.to_string(),
            r.strategy.map_or_else(|| "-".to_string(), |s| s.to_string()),
            r.run.to_string(),
            r.seed.to_string(),
            format_igd(r.igd),
            r.time_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in rd.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |i: usize| Error::Parse(format!("row {}: invalid {} `{}`", line + 1, HEADER[i], field(i)));
        let num = |i: usize| field(i).parse::<usize>().map_err(|_| bad(i));
        rows.push(ResultRow {
            front: field(0).to_string(),
            m: num(1)?,
            n: num(2)?,
            k: num(3)?,
            algo: field(4).parse().map_err(|_| bad(4))?,
            strategy: match field(5) {
                "-" => None,
                s => Some(s.parse().map_err(|_| bad(5))?),
            },
            run: num(6)?,
            seed: field(7).parse().map_err(|_| bad(7))?,
            igd: field(8).parse().map_err(|_| bad(8))?,
            time_ms: field(9).parse().map_err(|_| bad(9))?,
            over_time_limit: false,
        });
    }
    Ok(rows)
}

/// Writes rows to `path` (header-only for no rows).
pub fn emit_results_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    write_results(rows, BufWriter::new(File::create(path)?))
}

pub fn load_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    read_results(File::open(path)?)
}
