//! File formats and command implementations behind the `hritz` binary.
//!
//! Prescriptions and reports are JSON with sorted keys and floats written to
//! 17 significant digits, so identical inputs give byte-identical files.
//! Matrices are dense Matrix Market (`array complex general`).

use std::io::Write;
use std::path::Path;

pub mod commands;
mod error;
pub mod json;
pub mod mtx;

pub use commands::{run, Cli, Command, Outcome};
pub use error::CliError;
pub use json::{parse_prescription, prescription_json, to_canonical_string};
pub use mtx::{parse_matrix_market, read_matrix_market, to_matrix_market, write_matrix_market};

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
