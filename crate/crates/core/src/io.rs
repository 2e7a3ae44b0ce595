//! Plain-text formats for matrices, complexes, CSS codes, enumerators and
//! hypergraphs.
//!
//! Matrix block: a `rows cols` header, then one line per row listing the
//! 1-based columns holding a one. A blank line is a zero row and rows missing
//! at the end are zero. Lines starting with `#` are skipped; elsewhere `#`
//! starts a trailing comment. Complexes and CSS codes are two blocks
//! separated by a line `---`.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use thiserror::Error;

use crate::complex::{ChainComplex2, ComplexError};
use crate::css::{CssCode, CssError};
use crate::discrepancy::{DiscrepancyError, Hypergraph};
use crate::enumerator::WeightEnumerator;
use crate::f2::{F2Error, F2Matrix};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    File(#[from] std::io::Error),
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Css(#[from] CssError),
    #[error(transparent)]
    Hypergraph(#[from] DiscrepancyError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

/// Lines with their 1-based numbers, comment-only lines dropped and trailing
/// comments stripped.
fn content_lines(text: &str, first_line: usize) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + first_line, l.split('#').next().unwrap_or("").trim()))
        .collect()
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>, IoError> {
    s.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| parse_err(line, format!("not an integer: {tok:?}"))))
        .collect()
}

fn parse_matrix_at(text: &str, first_line: usize) -> Result<F2Matrix, IoError> {
    let lines = content_lines(text, first_line);
    let mut iter = lines.iter().skip_while(|(_, l)| l.is_empty());
    let &(hline, header) = iter.next().ok_or_else(|| parse_err(first_line, "missing `rows cols` header"))?;
    let dims = parse_usizes(hline, header)?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(hline, "header must be `rows cols`"));
    };
    let body: Vec<&(usize, &str)> = iter.collect();
    // trailing blank lines are zero rows anyway
    let last = body.iter().rposition(|(_, l)| !l.is_empty()).map_or(0, |p| p + 1);
    if last > rows {
        return Err(parse_err(body[rows].0, format!("more than {rows} rows")));
    }
    let mut supports = vec![Vec::new(); rows];
    for (r, &&(line, l)) in body.iter().take(last).enumerate() {
        let mut idx = Vec::new();
        for c in parse_usizes(line, l)? {
            if c == 0 || c > cols {
                return Err(parse_err(line, format!("column {c} outside 1..={cols}")));
            }
            idx.push(c - 1);
        }
        supports[r] = idx;
    }
    Ok(F2Matrix::new(rows, cols, supports)?)
}

pub fn parse_matrix(text: &str) -> Result<F2Matrix, IoError> {
    parse_matrix_at(text, 1)
}

pub fn write_matrix(m: &F2Matrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let line: Vec<String> = m.row_support(r).iter().map(|c| (c + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Splits at the single `---` line, returning both halves and the line
/// number where the second starts.
fn split_blocks(text: &str) -> Result<(String, String, usize), IoError> {
    let lines: Vec<&str> = text.lines().collect();
    let seps: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].trim() == "---").collect();
    match seps[..] {
        [s] => Ok((lines[..s].join("\n"), lines[s + 1..].join("\n"), s + 2)),
        [] => Err(parse_err(lines.len(), "missing `---` separator")),
        [_, second, ..] => Err(parse_err(second + 1, "more than one `---` separator")),
    }
}

fn parse_pair(text: &str) -> Result<(F2Matrix, F2Matrix), IoError> {
    let (a, b, second) = split_blocks(text)?;
    Ok((parse_matrix_at(&a, 1)?, parse_matrix_at(&b, second)?))
}

/// `d2` block, `---`, `d1` block. Shapes are checked, the boundary property
/// is not.
pub fn parse_complex(text: &str) -> Result<ChainComplex2, IoError> {
    let (d2, d1) = parse_pair(text)?;
    Ok(ChainComplex2::new(d2, d1)?)
}

pub fn write_complex(c: &ChainComplex2) -> String {
    format!("{}---\n{}", write_matrix(c.boundary2()), write_matrix(c.boundary1()))
}

/// X-generator rows, `---`, Z-generator rows.
pub fn parse_css(text: &str) -> Result<CssCode, IoError> {
    let (x, z) = parse_pair(text)?;
    if x.cols() != z.cols() {
        return Err(parse_err(1, format!("X block has {} columns, Z block {}", x.cols(), z.cols())));
    }
    Ok(CssCode::new(x.cols(), &x.to_bitvectors(), &z.to_bitvectors())?)
}

pub fn write_css(code: &CssCode) -> String {
    let (x, z) = code.matrices();
    format!("{}---\n{}", write_matrix(&x), write_matrix(&z))
}

/// `n`, then `n + 1` decimal counts.
pub fn parse_enumerator(text: &str) -> Result<WeightEnumerator, IoError> {
    let lines: Vec<(usize, &str)> = content_lines(text, 1).into_iter().filter(|(_, l)| !l.is_empty()).collect();
    let &(hline, header) = lines.first().ok_or_else(|| parse_err(1, "missing length line"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(hline, format!("bad length {header:?}")))?;
    let mut counts = Vec::new();
    for &(line, l) in &lines[1..] {
        for tok in l.split_whitespace() {
            counts.push(
                tok.parse::<BigUint>()
                    .map_err(|_| parse_err(line, format!("bad count {tok:?}")))?,
            );
        }
    }
    if counts.len() != n + 1 {
        return Err(parse_err(hline, format!("expected {} counts, found {}", n + 1, counts.len())));
    }
    Ok(WeightEnumerator::new(counts).expect("n + 1 >= 1 bins"))
}

pub fn write_enumerator(e: &WeightEnumerator) -> String {
    format!("{}\n{}\n", e.n(), e.to_strings().join(" "))
}

/// `n m d`, then `m` lines of `d` 1-based vertices.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, IoError> {
    let lines: Vec<(usize, &str)> = content_lines(text, 1).into_iter().filter(|(_, l)| !l.is_empty()).collect();
    let &(hline, header) = lines.first().ok_or_else(|| parse_err(1, "missing `n m d` header"))?;
    let dims = parse_usizes(hline, header)?;
    let [n, m, d] = dims[..] else {
        return Err(parse_err(hline, "header must be `n m d`"));
    };
    if lines.len() - 1 != m {
        return Err(parse_err(hline, format!("header promises {m} faces, found {}", lines.len() - 1)));
    }
    let mut faces = Vec::with_capacity(m);
    for &(line, l) in &lines[1..] {
        let face = parse_usizes(line, l)?;
        if let Some(&v) = face.iter().find(|&&v| v == 0 || v > n) {
            return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
        }
        faces.push(face.into_iter().map(|v| v - 1).collect());
    }
    Ok(Hypergraph::new(n, d, faces)?)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.n(), h.num_faces(), h.d());
    for f in h.faces() {
        let line: Vec<String> = f.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String, IoError> {
    Ok(fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{graph_cycle_complex, toric_complex};

    #[test]
    fn matrix_round_trip() {
        let m = F2Matrix::from_bit_rows(5, &["10100", "00000", "01011", "00000"]);
        let text = write_matrix(&m);
        assert_eq!(text, "4 5\n1 3\n\n2 4 5\n\n");
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert_eq!(write_matrix(&parse_matrix(&text).unwrap()), text);
    }

    #[test]
    fn matrix_comments_and_missing_rows() {
        let text = "# header comment\n3 4\n1 2 # trailing\n\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m, F2Matrix::from_bit_rows(4, &["1100", "0000", "0000"]));
    }

    #[test]
    fn matrix_errors() {
        assert!(matches!(parse_matrix("2 3\n4\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("1 3\n1\n2\n"), Err(IoError::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("2\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("1 3\nx\n"), Err(IoError::Parse { line: 2, .. })));
        assert!(parse_matrix("1 3\n1 1\n").is_err());
    }

    #[test]
    fn complex_round_trip() {
        for c in [toric_complex(3).unwrap(), graph_cycle_complex(12, 3, 4, 7).unwrap()] {
            let text = write_complex(&c);
            assert_eq!(parse_complex(&text).unwrap(), c);
        }
        assert!(parse_complex("1 1\n1\n").is_err());
        let err = parse_complex("1 1\n1\n---\n1 2\n3\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 5, .. }), "{err}");
    }

    #[test]
    fn css_round_trip() {
        let text = "3 7\n1 3 5 7\n2 3 6 7\n4 5 6 7\n---\n3 7\n1 3 5 7\n2 3 6 7\n4 5 6 7\n";
        let code = parse_css(text).unwrap();
        assert_eq!((code.n(), code.m_x(), code.m_z()), (7, 3, 3));
        assert_eq!(write_css(&code), text);
    }

    #[test]
    fn enumerator_round_trip() {
        let e = parse_enumerator("3\n1 0 3 0\n").unwrap();
        assert_eq!(e, WeightEnumerator::from_u64(&[1, 0, 3, 0]).unwrap());
        assert_eq!(write_enumerator(&e), "3\n1 0 3 0\n");
        assert!(parse_enumerator("3\n1 0 3\n").is_err());
        let big = parse_enumerator("1\n1 123456789012345678901234567890\n").unwrap();
        assert_eq!(big.count(1).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn hypergraph_round_trip() {
        let text = "4 2 2\n1 2\n2 3\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.faces(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(write_hypergraph(&h), text);
        assert!(parse_hypergraph("4 2 2\n1 2\n").is_err());
        assert!(parse_hypergraph("4 1 2\n1 5\n").is_err());
    }
}
