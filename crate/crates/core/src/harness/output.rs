//! Plot-ready CSV output.

use std::io::{Read, Write};
use std::path::Path;

use super::experiment::{MetricRecord, OpsMean};
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 14] = [
    "d0D_over_R",
    "d0T_over_R",
    "r_e",
    "se_bfs_oma",
    "se_bfs_noma",
    "se_hmars",
    "noma_duty_cycle",
    "ops_bfs_mul",
    "ops_bfs_add",
    "ops_bfs_trans",
    "ops_hmars_mul",
    "ops_hmars_add",
    "ops_hmars_trans",
    "trials",
];

pub const STDERR_COLUMNS: [&str; 3] = ["stderr_bfs_oma", "stderr_bfs_noma", "stderr_hmars"];

fn csv_error(path: &str, source: csv::Error) -> Error {
    Error::Csv {
        path: path.into(),
        source,
    }
}

/// Writes the header and one row per record. Standard-error columns are
/// appended after the fixed columns when `with_stderr` is set.
pub fn write_csv<W: Write>(
    records: &[MetricRecord],
    with_stderr: bool,
    sink: W,
    label: &str,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_stderr {
        header.extend(STDERR_COLUMNS);
    }
    w.write_record(&header).map_err(|e| csv_error(label, e))?;
    for r in records {
        let mut row = vec![
            r.d0d_over_r,
            r.d0t_over_r,
            r.r_e,
            r.se_bfs_oma,
            r.se_bfs_noma,
            r.se_hmars,
            r.noma_duty_cycle,
            r.ops_bfs.mul,
            r.ops_bfs.add,
            r.ops_bfs.trans,
            r.ops_hmars.mul,
            r.ops_hmars.add,
            r.ops_hmars.trans,
        ]
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>();
        row.push(r.trials.to_string());
        if with_stderr {
            row.extend(
                [r.stderr_bfs_oma, r.stderr_bfs_noma, r.stderr_hmars].map(|v| v.to_string()),
            );
        }
        w.write_record(&row).map_err(|e| csv_error(label, e))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: label.into(),
        source,
    })
}

/// Writes records to `path`, or to stdout when `path` is `None`.
pub fn emit_csv(
    records: &[MetricRecord],
    destination: Option<&Path>,
    with_stderr: bool,
) -> Result<()> {
    match destination {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|source| Error::Io {
                path: path.to_owned(),
                source,
            })?;
            write_csv(
                records,
                with_stderr,
                std::io::BufWriter::new(file),
                &path.display().to_string(),
            )
        }
        None => write_csv(records, with_stderr, std::io::stdout().lock(), "<stdout>"),
    }
}

/// Parses CSV written by [`write_csv`]. Standard errors read as zero when absent.
pub fn read_csv<R: Read>(source: R, label: &str) -> Result<Vec<MetricRecord>> {
    let mut rdr = csv::Reader::from_reader(source);
    let header = rdr.headers().map_err(|e| csv_error(label, e))?.clone();
    let fixed: Vec<&str> = header.iter().take(COLUMNS.len()).collect();
    if fixed != COLUMNS {
        return Err(Error::Config(format!(
            "{label}: unexpected header {header:?}"
        )));
    }
    let with_stderr = header.len() == COLUMNS.len() + STDERR_COLUMNS.len();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(label, e))?;
        let num = |k: usize| -> Result<f64> {
            row[k].parse::<f64>().map_err(|e| {
                Error::Config(format!("{label}: column {}: {e}", header[k].to_owned()))
            })
        };
        let trials = row[13]
            .parse::<u64>()
            .map_err(|e| Error::Config(format!("{label}: column trials: {e}")))?;
        let stderr = |k: usize| if with_stderr { num(k) } else { Ok(0.0) };
        out.push(MetricRecord {
            d0d_over_r: num(0)?,
            d0t_over_r: num(1)?,
            r_e: num(2)?,
            se_bfs_oma: num(3)?,
            se_bfs_noma: num(4)?,
            se_hmars: num(5)?,
            noma_duty_cycle: num(6)?,
            ops_bfs: OpsMean {
                mul: num(7)?,
                add: num(8)?,
                trans: num(9)?,
            },
            ops_hmars: OpsMean {
                mul: num(10)?,
                add: num(11)?,
                trans: num(12)?,
            },
            trials,
            stderr_bfs_oma: stderr(14)?,
            stderr_bfs_noma: stderr(15)?,
            stderr_hmars: stderr(16)?,
        });
    }
    Ok(out)
}
