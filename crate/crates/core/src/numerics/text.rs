//! Plain-text matrix format shared by every file the crate reads or writes.
//!
//! ```text
//! # optional comment lines
//! rows cols
//! re im re im ...   <- one line per row, `cols` complex entries
//! ```
//!
//! Vectors are matrices with one column. Numbers are written with 17
//! significant digits so that a write/read cycle is lossless.

use num_complex::Complex64;

use super::{CMatrix, CVector, LinalgError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Non-empty, non-comment lines paired with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_f64(token: &str, line: usize) -> Result<f64, FormatError> {
    let x: f64 = token.parse().map_err(|_| FormatError::Parse {
        line,
        msg: format!("invalid number {token:?}"),
    })?;
    if !x.is_finite() {
        return Err(FormatError::Parse {
            line,
            msg: format!("non-finite number {token:?}"),
        });
    }
    Ok(x)
}

pub(crate) fn parse_usize(token: &str, line: usize) -> Result<usize, FormatError> {
    token.parse().map_err(|_| FormatError::Parse {
        line,
        msg: format!("invalid count {token:?}"),
    })
}

pub fn write_matrix(m: &CMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{} {}", fmt_f64(z.re), fmt_f64(z.im)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_vector(v: &CVector, comments: &[String]) -> String {
    let m = CMatrix::new(v.dim(), 1, v.as_slice().to_vec()).expect("vector is a valid column");
    write_matrix(&m, comments)
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        msg: "missing `rows cols` header".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(FormatError::Parse {
            line: hline,
            msg: "header must be `rows cols`".into(),
        });
    }
    let rows = parse_usize(dims[0], hline)?;
    let cols = parse_usize(dims[1], hline)?;
    if rows == 0 || cols == 0 {
        return Err(FormatError::Parse {
            line: hline,
            msg: "dimensions must be positive".into(),
        });
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (lno, line) = lines.next().ok_or(FormatError::Parse {
            line: hline + r + 1,
            msg: format!("expected {rows} rows, found {r}"),
        })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 * cols {
            return Err(FormatError::Parse {
                line: lno,
                msg: format!("expected {} numbers, found {}", 2 * cols, tokens.len()),
            });
        }
        for pair in tokens.chunks(2) {
            data.push(Complex64::new(parse_f64(pair[0], lno)?, parse_f64(pair[1], lno)?));
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(FormatError::Parse {
            line: lno,
            msg: "trailing data after last row".into(),
        });
    }
    Ok(CMatrix::new(rows, cols, data)?)
}

pub fn parse_vector(text: &str) -> Result<CVector, FormatError> {
    let m = parse_matrix(text)?;
    if m.cols() != 1 {
        return Err(FormatError::Parse {
            line: 1,
            msg: format!("expected a vector (cols = 1), found {} columns", m.cols()),
        });
    }
    Ok(CVector::new(m.as_slice().to_vec())?)
}
