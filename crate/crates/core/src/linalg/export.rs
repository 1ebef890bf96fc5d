//! Matrix Market (coordinate, integer) and JSON serialization.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::matrix::{ExactMatrix, SparseMatQ};
use super::rational::{format_rational, lcm_denominators, parse_rational, Rational};
use crate::error::{Error, Result};

pub const MATRIX_MARKET_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";
const SCALE_PREFIX: &str = "% scale ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Json,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrixmarket" | "matrix-market" | "mtx" => Ok(Self::MatrixMarket),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown matrix format {other:?}"))),
        }
    }
}

/// JSON schema: `{"rows", "cols", "entries": [[row, col, "num/den"], ...]}`
/// with 0-based indices.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

fn nonzeros<M: ExactMatrix + ?Sized>(m: &M) -> Vec<(usize, usize, Rational)> {
    (0..m.nrows())
        .flat_map(|r| m.row_nonzeros(r).into_iter().map(move |(c, v)| (r, c, v)))
        .collect()
}

pub fn to_json<M: ExactMatrix + ?Sized>(m: &M) -> MatrixJson {
    MatrixJson {
        rows: m.nrows(),
        cols: m.ncols(),
        entries: nonzeros(m)
            .into_iter()
            .map(|(r, c, v)| (r, c, format_rational(&v)))
            .collect(),
    }
}

pub fn from_json(j: &MatrixJson) -> Result<SparseMatQ> {
    let trips = j
        .entries
        .iter()
        .map(|(r, c, s)| Ok((*r, *c, parse_rational(s)?)))
        .collect::<Result<Vec<_>>>()?;
    SparseMatQ::from_triplets(j.rows, j.cols, trips)
}

/// Writes the Matrix Market coordinate form. Non-integral matrices are
/// multiplied by the lcm of their denominators, recorded on a `% scale`
/// line. Returns that scale.
pub fn write_matrix_market<M: ExactMatrix + ?Sized, W: Write>(m: &M, out: &mut W) -> Result<BigInt> {
    let entries = nonzeros(m);
    let scale = lcm_denominators(entries.iter().map(|t| &t.2));
    writeln!(out, "{MATRIX_MARKET_HEADER}")?;
    if !scale.is_one() {
        writeln!(out, "{SCALE_PREFIX}{scale}")?;
    }
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), entries.len())?;
    for (r, c, v) in &entries {
        let scaled = v.numer() * (&scale / v.denom());
        writeln!(out, "{} {} {}", r + 1, c + 1, scaled)?;
    }
    Ok(scale)
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<SparseMatQ> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty Matrix Market input".into()))??;
    if header.trim() != MATRIX_MARKET_HEADER {
        return Err(Error::Parse(format!("unsupported header {header:?}")));
    }
    let mut scale = BigInt::one();
    let mut size: Option<(usize, usize, usize)> = None;
    let mut trips = Vec::new();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(s) = line.strip_prefix(SCALE_PREFIX) {
            scale = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad scale line {line:?}")))?;
            continue;
        }
        if line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("expected three fields in {line:?}")));
        }
        let parse_idx = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse(format!("bad index {s:?}")))
        };
        match size {
            None => size = Some((parse_idx(fields[0])?, parse_idx(fields[1])?, parse_idx(fields[2])?)),
            Some(_) => {
                let (r, c) = (parse_idx(fields[0])?, parse_idx(fields[1])?);
                if r == 0 || c == 0 {
                    return Err(Error::Parse("Matrix Market indices are 1-based".into()));
                }
                let v: BigInt = fields[2]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {:?}", fields[2])))?;
                trips.push((r - 1, c - 1, Rational::new(v, scale.clone())));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if trips.len() != nnz {
        return Err(Error::Parse(format!("declared {nnz} entries, found {}", trips.len())));
    }
    SparseMatQ::from_triplets(rows, cols, trips)
}

/// Serializes `m` in the requested format.
pub fn export_matrix<M: ExactMatrix + ?Sized, W: Write>(
    m: &M,
    format: MatrixFormat,
    out: &mut W,
) -> Result<()> {
    match format {
        MatrixFormat::MatrixMarket => {
            write_matrix_market(m, out)?;
        }
        MatrixFormat::Json => {
            serde_json::to_writer(&mut *out, &to_json(m))?;
            writeln!(out)?;
        }
    }
    Ok(())
}
