//! Writers for the CSV and JSON outputs.
//!
//! CSV files start with `#`-prefixed header lines echoing the artifact
//! version and the scientific configuration, then a column-name row, then
//! one row per sample. JSON mirrors the same fields. Floats are written
//! with Rust's shortest round-trip formatting, so identical configurations
//! produce identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::VERSION;

/// Stdout or a buffered file.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// The `#` header block shared by all CSV outputs.
pub fn csv_header(w: &mut dyn Write, command: &str, fields: &[(&str, String)]) -> io::Result<()> {
    writeln!(w, "# kitaev {VERSION}")?;
    writeln!(w, "# command: {command}")?;
    for (key, value) in fields {
        writeln!(w, "# {key}: {value}")?;
    }
    Ok(())
}

/// Serialize `value` as pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)
        .map_err(io::Error::other)?;
    writeln!(w)
}
