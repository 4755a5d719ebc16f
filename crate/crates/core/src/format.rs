//! Plain-text matrix format.
//!
//! A matrix is written as whitespace separated decimal tokens: the row and
//! column counts followed by the entries in row-major order. The writer puts
//! the header and each row on its own line.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intmat::IntMat;

pub fn write_matrix(a: &IntMat) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Several matrices separated by one blank line.
pub fn write_matrices(ms: &[&IntMat]) -> String {
    ms.iter().map(|m| write_matrix(m)).collect::<Vec<_>>().join("\n")
}

fn parse_count(tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad {what} `{tok}`")))
}

/// Parses exactly one matrix; trailing tokens are an error.
pub fn parse_matrix(text: &str) -> Result<IntMat> {
    let mut all = parse_matrices(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Error::Parse("empty input".into())),
        k => Err(Error::Parse(format!("expected one matrix, found {k}"))),
    }
}

/// Parses a sequence of matrices written back to back.
pub fn parse_matrices(text: &str) -> Result<Vec<IntMat>> {
    let mut toks = text.split_whitespace().peekable();
    let mut out = Vec::new();
    while toks.peek().is_some() {
        let rows = parse_count(toks.next(), "row count")?;
        let cols = parse_count(toks.next(), "column count")?;
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::Parse("matrix too large".into()))?;
        let mut data = Vec::with_capacity(n);
        for k in 0..n {
            let tok = toks
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} entries, found {k}")))?;
            let v = BigInt::from_str(tok).map_err(|_| Error::Parse(format!("bad entry `{tok}`")))?;
            data.push(v);
        }
        out.push(IntMat::from_vec(rows, cols, data)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_rows_on_lines() {
        let a = IntMat::from_rows(&[[1, -2], [30, 4]]);
        assert_eq!(write_matrix(&a), "2 2\n1 -2\n30 4\n");
        assert_eq!(write_matrix(&IntMat::zeros(0, 3)), "0 3\n");
        assert_eq!(write_matrix(&IntMat::zeros(2, 0)), "2 0\n\n\n");
    }

    #[test]
    fn round_trip() {
        let a = IntMat::from_rows(&[[1, -2, 3], [0, 99999, -7]]);
        assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a);
        let e = IntMat::zeros(2, 0);
        assert_eq!(parse_matrix(&write_matrix(&e)).unwrap(), e);
        let two = write_matrices(&[&a, &e]);
        assert_eq!(parse_matrices(&two).unwrap(), vec![a, e]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_matrix("2 2 1 2 3"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("1 1 x"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("-1 1 2"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(""), Err(Error::Parse(_))));
    }

    #[test]
    fn accepts_free_whitespace() {
        let a = parse_matrix(" 2\t1\n\n 5\n-6 ").unwrap();
        assert_eq!(a, IntMat::column(&[5, -6]));
    }
}
