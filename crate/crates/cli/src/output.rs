//! Deterministic text output: CSV sweep tables and JSON event lists.
//!
//! All real numbers are written in scientific notation with 12 significant
//! digits and `.` as the decimal separator, so repeated runs produce
//! byte-identical files that diff cleanly.

use std::io::Write;

use crate::sweep::{EventRecord, SweepRow};
use crate::CliError;

/// Column order of the sweep CSV. The header line is part of the output
/// contract and is matched byte-for-byte by the reader-side validator.
pub const CSV_HEADER: &str = "nu,c1,c2,c3,lambda_psi_plus,lambda_psi_minus,lambda_phi_plus,\
lambda_phi_minus,mutual_info,classical_corr,discord,concurrence,chi_value,chi_axis,q,\
rel_entropy_discord";

/// Renders a float with 12 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn format_row(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_f64(row.nu),
        fmt_f64(row.c1),
        fmt_f64(row.c2),
        fmt_f64(row.c3),
        fmt_f64(row.lambda_psi_plus),
        fmt_f64(row.lambda_psi_minus),
        fmt_f64(row.lambda_phi_plus),
        fmt_f64(row.lambda_phi_minus),
        fmt_f64(row.mutual_info),
        fmt_f64(row.classical_corr),
        fmt_f64(row.discord),
        fmt_f64(row.concurrence),
        fmt_f64(row.chi_value),
        row.chi_axis.index(),
        fmt_f64(row.q),
        fmt_f64(row.rel_entropy_discord),
    )
}

pub fn write_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut buf = String::with_capacity(rows.len() * 300 + CSV_HEADER.len() + 1);
    buf.push_str(CSV_HEADER);
    buf.push('\n');
    for row in rows {
        buf.push_str(&format_row(row));
        buf.push('\n');
    }
    w.write_all(buf.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write CSV output: {e}")))
}

pub fn write_events_json<W: Write>(mut w: W, events: &[EventRecord]) -> Result<(), CliError> {
    let mut buf = serde_json::to_vec_pretty(events)
        .map_err(|e| CliError::Io(format!("cannot serialize events: {e}")))?;
    buf.push(b'\n');
    w.write_all(&buf)
        .map_err(|e| CliError::Io(format!("cannot write events output: {e}")))
}

/// Writes `contents` produced by `render` either to the given path or, when
/// no path is supplied, to standard output.
pub fn to_path_or_stdout(
    path: Option<&std::path::Path>,
    render: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            let mut writer = std::io::BufWriter::new(file);
            render(&mut writer)?;
            writer
                .flush()
                .map_err(|e| CliError::Io(format!("cannot flush {}: {e}", p.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            render(&mut lock)
        }
    }
}
