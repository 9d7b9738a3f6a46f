//! Bit-exact binary matrices and their row/column integer codes.
//!
//! A matrix is stored as one machine word per row. Column 1 is the most
//! significant bit of a row code, so the row `(1,1,0,0)` has code 12; row 1
//! is the most significant bit of a column code. Lexicographic comparison of
//! code tuples is the ordering everything else in this crate is built on.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Integer value of a single row or column read as a binary numeral.
pub type Code = u64;

/// Maximum number of rows or columns. Keeps every row and column code
/// inside one machine word, which is the whole point of the representation.
pub const MAX_DIM: usize = 32;

pub(crate) fn ensure_dims(n: usize, m: usize) -> Result<()> {
    if n > MAX_DIM || m > MAX_DIM {
        return Err(Error::Domain(format!(
            "matrix size {n}x{m} exceeds the {MAX_DIM}x{MAX_DIM} word-size limit"
        )));
    }
    Ok(())
}

/// An n×m matrix over {0,1}, rows stored as integer codes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryMatrix {
    n: usize,
    m: usize,
    rows: Vec<Code>,
}

impl BinaryMatrix {
    /// All-zero n×m matrix. Zero-sized matrices are legal.
    pub fn zero(n: usize, m: usize) -> Result<Self> {
        ensure_dims(n, m)?;
        Ok(BinaryMatrix { n, m, rows: vec![0; n] })
    }

    /// Builds a matrix from row codes; the row count is `rows.len()`.
    pub fn from_rows(m: usize, rows: Vec<Code>) -> Result<Self> {
        ensure_dims(rows.len(), m)?;
        let limit: u128 = 1u128 << m;
        if let Some(&bad) = rows.iter().find(|&&x| (x as u128) >= limit) {
            return Err(Error::Domain(format!(
                "row code {bad} does not fit in {m} columns"
            )));
        }
        Ok(BinaryMatrix { n: rows.len(), m, rows })
    }

    /// Builds a matrix from entry rows, each a slice of 0/1 values.
    pub fn from_entry_rows(entries: &[&[u8]]) -> Result<Self> {
        let n = entries.len();
        let m = entries.first().map_or(0, |r| r.len());
        ensure_dims(n, m)?;
        let mut rows = Vec::with_capacity(n);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Domain(format!(
                    "row {} has {} entries, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            let mut code: Code = 0;
            for &e in row.iter() {
                if e > 1 {
                    return Err(Error::Domain(format!("entry {e} is not 0 or 1")));
                }
                code = (code << 1) | e as Code;
            }
            rows.push(code);
        }
        Ok(BinaryMatrix { n, m, rows })
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.m
    }

    /// True when either dimension is zero.
    pub fn is_empty(&self) -> bool {
        self.n == 0 || self.m == 0
    }

    /// Code of row `i` (0-based).
    pub fn row(&self, i: usize) -> Code {
        self.rows[i]
    }

    /// All row codes.
    pub fn row_slice(&self) -> &[Code] {
        &self.rows
    }

    /// Entry at row `i`, column `j` (both 0-based).
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.m, "entry ({i},{j}) out of bounds");
        (self.rows[i] >> (self.m - 1 - j)) & 1 == 1
    }

    /// Total number of 1 entries.
    pub fn ones(&self) -> u32 {
        self.rows.iter().map(|x| x.count_ones()).sum()
    }

    /// The ordered tuple of row codes.
    pub fn row_code(&self) -> RowCode {
        RowCode(self.rows.clone())
    }

    /// The ordered tuple of column codes (row 1 most significant).
    pub fn col_code(&self) -> ColCode {
        let mut values = vec![0; self.m];
        for (j, v) in values.iter_mut().enumerate() {
            let mut y: Code = 0;
            for i in 0..self.n {
                y = (y << 1) | ((self.rows[i] >> (self.m - 1 - j)) & 1);
            }
            *v = y;
        }
        ColCode(values)
    }

    /// The m×n matrix with entries mirrored across the diagonal.
    pub fn transpose(&self) -> BinaryMatrix {
        let mut rows = vec![0; self.m];
        for (j, r) in rows.iter_mut().enumerate() {
            let mut code: Code = 0;
            for i in 0..self.n {
                code = (code << 1) | ((self.rows[i] >> (self.m - 1 - j)) & 1);
            }
            *r = code;
        }
        BinaryMatrix { n: self.m, m: self.n, rows }
    }

    /// True when the row codes are nondecreasing.
    pub fn rows_sorted(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] <= w[1])
    }

    /// Every n×m matrix, in increasing row-code order. Requires n·m ≤ 63.
    pub fn all(n: usize, m: usize) -> Result<AllMatrices> {
        ensure_dims(n, m)?;
        if n * m > 63 {
            return Err(Error::Domain(format!(
                "cannot enumerate all {n}x{m} matrices: {} cells exceed one word",
                n * m
            )));
        }
        Ok(AllMatrices { n, m, next: 0, end: 1u64 << (n * m) })
    }

    /// Matrix at position `bits` of the [`BinaryMatrix::all`] order: the
    /// cells packed row-major into one word, row 1 most significant.
    pub(crate) fn from_cell_bits(n: usize, m: usize, bits: u64) -> BinaryMatrix {
        let mask = if m == 0 { 0 } else { (1u64 << m) - 1 };
        let rows = (0..n)
            .map(|i| (bits >> ((n - 1 - i) * m)) & mask)
            .collect();
        BinaryMatrix { n, m, rows }
    }
}

/// Iterator over the full set of n×m binary matrices.
pub struct AllMatrices {
    n: usize,
    m: usize,
    next: u64,
    end: u64,
}

impl Iterator for AllMatrices {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        if self.next == self.end {
            return None;
        }
        let bits = self.next;
        self.next += 1;
        Some(BinaryMatrix::from_cell_bits(self.n, self.m, bits))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix({}x{}, r={})", self.n, self.m, self.row_code())
    }
}

/// Matrix text format: `n m` header, then n lines of exactly m characters
/// from {0,1}.
impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m)?;
        for &row in &self.rows {
            for j in 0..self.m {
                let bit = (row >> (self.m - 1 - j)) & 1;
                write!(f, "{}", bit)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.split('\n');
        let header = lines.next().unwrap_or("").trim_end_matches('\r');
        let mut parts = header.split_whitespace();
        let parse_dim = |tok: Option<&str>, what: &str| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing {what} in header, expected `n m`"),
            })?
            .parse::<usize>()
            .map_err(|_| Error::Parse {
                line: 1,
                message: format!("invalid {what} in header, expected `n m`"),
            })
        };
        let n = parse_dim(parts.next(), "row count")?;
        let m = parse_dim(parts.next(), "column count")?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: 1,
                message: "header has trailing tokens, expected `n m`".into(),
            });
        }
        ensure_dims(n, m).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;

        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line_no = i + 2;
            let line = match lines.next() {
                Some(l) => l.trim_end_matches('\r'),
                None if m == 0 => "",
                None => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("missing row {} of {n}", i + 1),
                    })
                }
            };
            if line.len() != m {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("row has {} characters, expected {m}", line.len()),
                });
            }
            let mut code: Code = 0;
            for ch in line.chars() {
                match ch {
                    '0' => code <<= 1,
                    '1' => code = (code << 1) | 1,
                    _ => {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("invalid character '{ch}', expected 0 or 1"),
                        })
                    }
                }
            }
            rows.push(code);
        }
        for (extra, line) in lines.enumerate() {
            if !line.trim().is_empty() {
                return Err(Error::Parse {
                    line: n + 2 + extra,
                    message: "unexpected content after last row".into(),
                });
            }
        }
        Ok(BinaryMatrix { n, m, rows })
    }
}

/// Ordered tuple of row codes; `Ord` is the lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RowCode(pub Vec<Code>);

/// Ordered tuple of column codes; `Ord` is the lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColCode(pub Vec<Code>);

impl RowCode {
    pub fn values(&self) -> &[Code] {
        &self.0
    }
}

impl ColCode {
    pub fn values(&self) -> &[Code] {
        &self.0
    }
}

fn fmt_codes(values: &[Code], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for RowCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_codes(&self.0, f)
    }
}

impl fmt::Display for ColCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_codes(&self.0, f)
    }
}

/// Rebuilds the unique matrix whose row code is `rc`.
pub fn decode_row_code(rc: &RowCode, m: usize) -> Result<BinaryMatrix> {
    BinaryMatrix::from_rows(m, rc.0.clone())
}

/// Builds a [`BinaryMatrix`] from rows of 0/1 literals:
/// `matrix![[0,0,1,1],[1,0,1,0]]`.
#[macro_export]
macro_rules! matrix {
    ($([$($e:expr),* $(,)?]),+ $(,)?) => {
        $crate::BinaryMatrix::from_entry_rows(&[$(&[$($e as u8),*][..]),+]).unwrap()
    };
}
