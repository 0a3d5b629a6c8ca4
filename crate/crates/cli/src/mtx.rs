//! Dense Matrix Market files: `array complex general`, column-major.

use std::fmt::Write as _;
use std::path::Path;

use hritz_core::{Matrix, C64};

use crate::{write_atomic, CliError};

const HEADER: &str = "%%MatrixMarket matrix array complex general";

/// Render `m` in Matrix Market array format. Values use the shortest
/// representation that reads back to the same `f64`.
pub fn to_matrix_market(m: &Matrix) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m[(i, j)];
            let _ = writeln!(out, "{:?} {:?}", z.re, z.im);
        }
    }
    out
}

pub fn write_matrix_market(m: &Matrix, path: &Path) -> Result<(), CliError> {
    write_atomic(path, to_matrix_market(m).as_bytes())
}

pub fn read_matrix_market(path: &Path) -> Result<Matrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix_market(&text)
}

fn format_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::MatrixMarket {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix_market(text: &str) -> Result<Matrix, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| format_err(1, "empty file"))?;
    let words: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words != ["%%matrixmarket", "matrix", "array", "complex", "general"] {
        return Err(format_err(1, format!("expected header {HEADER:?}")));
    }

    let mut content = lines.filter(|(_, l)| !l.starts_with('%') && !l.trim().is_empty());
    let (dline, dims) = content
        .next()
        .ok_or_else(|| format_err(2, "missing dimension line"))?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|w| w.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format_err(dline, "dimensions must be two non-negative integers"))?;
    let [rows, cols] = dims[..] else {
        return Err(format_err(
            dline,
            "dimensions must be two non-negative integers",
        ));
    };

    let mut values = Vec::with_capacity(rows * cols);
    let mut last = dline;
    for (ln, line) in content {
        if values.len() == rows * cols {
            return Err(format_err(ln, format!("more than {} entries", rows * cols)));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [re, im] = parts[..] else {
            return Err(format_err(ln, "expected a real and an imaginary part"));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format_err(ln, format!("{s:?} is not a number")))
        };
        values.push(C64::new(parse(re)?, parse(im)?));
        last = ln;
    }
    if values.len() < rows * cols {
        return Err(format_err(
            last + 1,
            format!(
                "file ends after {} of {} entries",
                values.len(),
                rows * cols
            ),
        ));
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| values[j * rows + i]))
}
