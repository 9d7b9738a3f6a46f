//! Per-row statistics: ones counts, row multiplicities, runs of equal rows,
//! and the column positions carrying each row's ones.

use std::collections::HashMap;

use crate::matrix::{BinaryMatrix, Code};

/// A maximal run of equal consecutive row codes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Run {
    /// 0-based index of the first row of the run.
    pub start: usize,
    pub len: usize,
    pub value: Code,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowStats {
    eps: Vec<u32>,
    zeta: Vec<u32>,
    blocks: Vec<Run>,
    upsilon: Vec<Vec<usize>>,
}

impl RowStats {
    /// Ones count per row.
    pub fn eps(&self) -> &[u32] {
        &self.eps
    }

    /// Multiplicity of each row's code in the whole row multiset.
    pub fn zeta(&self) -> &[u32] {
        &self.zeta
    }

    /// Maximal runs of equal consecutive rows.
    pub fn blocks(&self) -> &[Run] {
        &self.blocks
    }

    /// Ascending 0-based column positions where row `i` has a 1.
    pub fn upsilon(&self, i: usize) -> &[usize] {
        &self.upsilon[i]
    }
}

/// Computes [`RowStats`] for a matrix. Multiplicities count equal rows
/// anywhere, so the definition also holds for unsorted inputs; for sorted
/// rows they coincide with run lengths.
pub fn row_stats(a: &BinaryMatrix) -> RowStats {
    let rows = a.row_slice();
    let m = a.ncols();
    let eps: Vec<u32> = rows.iter().map(|x| x.count_ones()).collect();

    let mut counts: HashMap<Code, u32> = HashMap::new();
    for &x in rows {
        *counts.entry(x).or_insert(0) += 1;
    }
    let zeta: Vec<u32> = rows.iter().map(|x| counts[x]).collect();

    let mut blocks = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let mut j = i + 1;
        while j < rows.len() && rows[j] == rows[i] {
            j += 1;
        }
        blocks.push(Run { start: i, len: j - i, value: rows[i] });
        i = j;
    }

    if a.rows_sorted() {
        // Sorted rows keep equal codes contiguous, so each multiplicity
        // must equal the length of the run containing the row.
        for b in &blocks {
            debug_assert_eq!(
                b.len as u32, counts[&b.value],
                "run length disagrees with multiplicity on sorted rows"
            );
        }
    }

    let upsilon: Vec<Vec<usize>> = rows
        .iter()
        .map(|&x| (0..m).filter(|&j| (x >> (m - 1 - j)) & 1 == 1).collect())
        .collect();

    RowStats { eps, zeta, blocks, upsilon }
}
