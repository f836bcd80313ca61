//! Report writers and the operator CSV reader.
//!
//! JSON reports carry 12 significant digits. Operator CSV files carry the
//! shortest round-trip decimal of every entry; reading a file back
//! reproduces the matrix exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::format::{fmt_exact, fmt_sig};
use crate::matrix::CMatrix;
use crate::{PhaseError, Result};

/// Largest matrix dimension [`read_operator_csv`] will allocate.
pub const MAX_CSV_DIM: usize = 4096;

pub const OPERATOR_CSV_HEADER: &str = "m,n,re,im";

/// Pretty-printed JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| PhaseError::validation(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// `m,n,re,im` rows in row-major order.
pub fn operator_csv(matrix: &CMatrix) -> String {
    let n = matrix.dim();
    let mut out = String::with_capacity(32 * n * n + 16);
    out.push_str(OPERATOR_CSV_HEADER);
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            let z = matrix[(i, j)];
            let _ = writeln!(out, "{i},{j},{},{}", fmt_exact(z.re), fmt_exact(z.im));
        }
    }
    out
}

/// `theta,p` rows.
pub fn distribution_csv(thetas: &[f64], values: &[f64]) -> String {
    let mut out = String::from("theta,p\n");
    for (t, p) in thetas.iter().zip(values) {
        let _ = writeln!(out, "{},{}", fmt_sig(*t), fmt_sig(*p));
    }
    out
}

/// Generic table with a header row; every value at report precision.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn parse_field<T: std::str::FromStr>(field: &str, pos: usize, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| PhaseError::parse(pos, format!("invalid {what} '{}'", field.trim())))
}

/// Reads an operator written by [`operator_csv`]. Rows may come in any
/// order but every entry of the square matrix must appear exactly once.
pub fn read_operator_csv(text: &str) -> Result<CMatrix> {
    let mut offset = 0;
    let mut lines = text.split_inclusive('\n').map(|line| {
        let start = offset;
        offset += line.len();
        (start, line.trim_end_matches(['\n', '\r']))
    });
    match lines.next() {
        Some((_, header)) if header.trim() == OPERATOR_CSV_HEADER => {}
        _ => {
            return Err(PhaseError::parse(
                0,
                format!("expected header '{OPERATOR_CSV_HEADER}'"),
            ))
        }
    }
    let mut cells: Vec<(usize, usize, Complex64, usize)> = Vec::new();
    let mut dim = 0usize;
    for (pos, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(PhaseError::parse(
                pos,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let m: usize = parse_field(fields[0], pos, "row index")?;
        let n: usize = parse_field(fields[1], pos, "column index")?;
        let re: f64 = parse_field(fields[2], pos, "real part")?;
        let im: f64 = parse_field(fields[3], pos, "imaginary part")?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(PhaseError::parse(pos, "matrix entries must be finite"));
        }
        if m >= MAX_CSV_DIM || n >= MAX_CSV_DIM {
            return Err(PhaseError::parse(
                pos,
                format!("index exceeds the limit {MAX_CSV_DIM}"),
            ));
        }
        dim = dim.max(m + 1).max(n + 1);
        cells.push((m, n, Complex64::new(re, im), pos));
    }
    if dim == 0 {
        return Err(PhaseError::parse(text.len(), "no matrix entries"));
    }
    if cells.len() != dim * dim {
        return Err(PhaseError::parse(
            text.len(),
            format!(
                "expected {} entries for a {dim}x{dim} matrix, found {}",
                dim * dim,
                cells.len()
            ),
        ));
    }
    let mut seen = vec![false; dim * dim];
    let mut matrix = CMatrix::zeros(dim);
    for (m, n, z, pos) in cells {
        if std::mem::replace(&mut seen[m * dim + n], true) {
            return Err(PhaseError::parse(pos, format!("duplicate entry ({m},{n})")));
        }
        matrix[(m, n)] = z;
    }
    Ok(matrix)
}

/// Writes `text` to `path`, mapping failures to I/O errors.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| PhaseError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn operator_round_trip() {
        let m = CMatrix::from_fn(3, |i, j| {
            Complex64::new(1.0 / (1 + i + 2 * j) as f64, -(i as f64) * 1e-17)
        });
        let back = read_operator_csv(&operator_csv(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn reader_errors() {
        assert!(read_operator_csv("").is_err());
        assert!(read_operator_csv("m,n,re,im\n").is_err());
        assert!(read_operator_csv("m,n,re,im\n0,0,1,0\n0,1,1,0\n").is_err());
        let dup = "m,n,re,im\n0,0,1,0\n0,0,1,0\n1,0,0,0\n1,1,0,0\n";
        match read_operator_csv(dup) {
            Err(PhaseError::Parse { msg, .. }) => assert!(msg.contains("duplicate")),
            other => panic!("{other:?}"),
        }
        match read_operator_csv("m,n,re,im\n0,0,x,0\n") {
            Err(PhaseError::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
        assert!(read_operator_csv("m,n,re,im\n0,0,NaN,0\n").is_err());
        assert!(read_operator_csv("m,n,re,im\n99999,0,1,0\n").is_err());
    }

    #[test]
    fn crlf_and_blank_lines() {
        let m = read_operator_csv("m,n,re,im\r\n0,0,2.5,-1\r\n\r\n").unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(2.5, -1.0));
    }

    #[test]
    fn distribution_rows() {
        assert_eq!(
            distribution_csv(&[0.5], &[1.0 / 3.0]),
            "theta,p\n0.5,0.333333333333\n"
        );
    }

    proptest! {
        #[test]
        fn reader_never_panics(text in "\\PC{0,200}") {
            let _ = read_operator_csv(&text);
        }

        #[test]
        fn round_trip_is_exact(vals in prop::collection::vec(-1e3f64..1e3, 8)) {
            let m = CMatrix::from_fn(2, |i, j| Complex64::new(vals[2 * i + j], vals[4 + 2 * i + j] * 1e-9));
            prop_assert_eq!(read_operator_csv(&operator_csv(&m)).unwrap(), m);
        }
    }
}
