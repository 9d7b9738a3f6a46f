//! Fast canonicity machinery: the semi-canonicity predicate, the recursive
//! seven-condition canonicity test, block decomposition, and a
//! branch-and-bound canonicalizer.
//!
//! A matrix is canonical when its row-code tuple is lexicographically
//! minimal over its whole row/column-permutation orbit. The test here never
//! scans the orbit. It checks, in order:
//!
//! 1. row codes nondecreasing;
//! 2. the first row is `2^s - 1` where `s` is its ones count;
//! 3. no later row has fewer ones than the first;
//! 4. no later run of equal rows with `s` ones is longer than the leading
//!    run;
//! 5. the last `s` column codes are nondecreasing;
//! 6. no later run of equal weight and length leads to a smaller matrix
//!    when its rows take over the leading block;
//! 7. the rows below the leading block are themselves minimal once the
//!    leading block is stripped.
//!
//! Conditions 6 and 7 are decided exactly by carrying an ordered column
//! partition through the recursion. Placing a run of rows on top pins its
//! ones to the tail columns only as a *set*: the admissible column
//! permutations afterwards are those preserving an ordered partition of the
//! columns, refined block-by-block as rows are placed. Condition 7 therefore
//! recurses on the residual rows *with the partition* (the zero/one split of
//! the stripped block), so the residual head and tail columns are minimized
//! jointly; checking the head columns alone is not enough, because a
//! relabeling that only permutes head columns and rows can fix the head
//! block while strictly shrinking the tail block. Condition 6 compares
//! against the true minimum of the competing run's family, computed by the
//! same partition-constrained search.
//!
//! The test is validated against [`crate::oracle`] by exhaustive sweeps over
//! small shapes; see the tests and the `acceptance` suite.

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, Code};
use crate::oracle::{col_perms, min_orbit_rows};
use crate::perm::{apply_perms, Permutation};
use crate::stats::{row_stats, Run};

use rayon::prelude::*;
use std::fmt;

#[inline]
fn low_ones(k: u32) -> Code {
    if k == 0 {
        0
    } else {
        (1u64 << k) - 1
    }
}

/// True iff both the row codes and the column codes are nondecreasing.
pub fn is_semi_canonical(a: &BinaryMatrix) -> bool {
    a.rows_sorted() && a.col_code().values().windows(2).all(|w| w[0] <= w[1])
}

/// True iff the first row is a run of 0s followed by a run of 1s and the
/// first column is a run of 0s followed by a run of 1s. Every semi-canonical
/// matrix has this shape.
pub fn first_row_structure_holds(a: &BinaryMatrix) -> bool {
    if a.is_empty() {
        return true;
    }
    let x1 = a.row(0);
    let y1 = a.col_code().values()[0];
    x1 == low_ones(x1.count_ones()) && y1 == low_ones(y1.count_ones())
}

/// Where a canonicity condition failed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    /// 0-based index of the offending row, within the matrix at the
    /// reported recursion depth.
    Row(usize),
    /// 0-based indices of an out-of-order column pair.
    ColumnPair(usize, usize),
    /// A strictly smaller equivalent matrix; `row` is the 0-based start of
    /// the run whose promotion produces it.
    Competitor { row: usize, matrix: BinaryMatrix },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Row(i) => write!(f, "row {}", i + 1),
            Witness::ColumnPair(j, k) => write!(f, "columns {} and {}", j + 1, k + 1),
            Witness::Competitor { row, matrix } => write!(
                f,
                "promoting the run at row {} reaches the smaller row code {}",
                row + 1,
                matrix.row_code()
            ),
        }
    }
}

/// Outcome of the canonicity test, with the first failed condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicityReport {
    pub is_canonical: bool,
    /// 1..=7 when a condition failed.
    pub failed_condition: Option<u8>,
    pub witness: Option<Witness>,
    /// Recursion depth at which the failure occurred; 0 on success.
    pub depth: usize,
}

impl CanonicityReport {
    fn ok() -> Self {
        CanonicityReport {
            is_canonical: true,
            failed_condition: None,
            witness: None,
            depth: 0,
        }
    }

    fn fail(condition: u8, witness: Witness, depth: usize) -> Self {
        CanonicityReport {
            is_canonical: false,
            failed_condition: Some(condition),
            witness: Some(witness),
            depth,
        }
    }
}

impl fmt::Display for CanonicityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failed_condition {
            None => write!(f, "canonical"),
            Some(c) => {
                write!(f, "not canonical: condition {c} fails at depth {}", self.depth)?;
                if let Some(w) = &self.witness {
                    write!(f, " ({w})")?;
                }
                Ok(())
            }
        }
    }
}

/// Leading-run shape of a sorted matrix: `s` ones in the first row, first
/// run of length `t`.
struct LeadShape {
    s: usize,
    t: usize,
    blocks: Vec<Run>,
}

/// Checks conditions 1-4 in their plain, unpartitioned form; on success
/// returns the lead shape.
fn check_conditions_1_to_4(a: &BinaryMatrix) -> std::result::Result<LeadShape, (u8, Witness)> {
    let rows = a.row_slice();
    if let Some(i) = (0..rows.len().saturating_sub(1)).find(|&i| rows[i] > rows[i + 1]) {
        return Err((1, Witness::Row(i + 1)));
    }
    let s = rows[0].count_ones();
    if rows[0] != low_ones(s) {
        return Err((2, Witness::Row(0)));
    }
    if let Some(i) = (1..rows.len()).find(|&i| rows[i].count_ones() < s) {
        return Err((3, Witness::Row(i)));
    }
    let stats = row_stats(a);
    let blocks = stats.blocks().to_vec();
    let t = blocks[0].len;
    for run in &blocks[1..] {
        if run.value.count_ones() == s && run.len > t {
            return Err((4, Witness::Row(run.start)));
        }
    }
    Ok(LeadShape { s: s as usize, t, blocks })
}

/// The block partition of a matrix satisfying conditions 1-4: a `t×(m-s)`
/// zero block and `t×s` ones block on top of the residual pair `(B, C)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockDecomposition {
    s: usize,
    t: usize,
    o: BinaryMatrix,
    e: BinaryMatrix,
    b: BinaryMatrix,
    c: BinaryMatrix,
}

impl BlockDecomposition {
    /// Ones count of the first row.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Length of the leading run of equal rows.
    pub fn t(&self) -> usize {
        self.t
    }

    /// The `t×(m-s)` all-zero block.
    pub fn o(&self) -> &BinaryMatrix {
        &self.o
    }

    /// The `t×s` all-ones block.
    pub fn e(&self) -> &BinaryMatrix {
        &self.e
    }

    /// Rows below the leading run, first `m-s` columns.
    pub fn b(&self) -> &BinaryMatrix {
        &self.b
    }

    /// Rows below the leading run, last `s` columns.
    pub fn c(&self) -> &BinaryMatrix {
        &self.c
    }

    /// Puts the four blocks back together.
    pub fn reassemble(&self) -> BinaryMatrix {
        let s = self.s;
        let m = self.o.ncols() + s;
        let mut rows = Vec::with_capacity(self.o.nrows() + self.b.nrows());
        for _ in 0..self.o.nrows() {
            rows.push(low_ones(s as u32));
        }
        for i in 0..self.b.nrows() {
            rows.push((self.b.row(i) << s) | self.c.row(i));
        }
        BinaryMatrix::from_rows(m, rows).expect("blocks came from a valid matrix")
    }
}

/// Splits a matrix satisfying conditions 1-4 into its `(O, E, B, C)` blocks.
pub fn block_decompose(a: &BinaryMatrix) -> Result<BlockDecomposition> {
    if a.is_empty() {
        return Err(Error::Structure(
            "cannot block-decompose an empty matrix".into(),
        ));
    }
    let shape = check_conditions_1_to_4(a).map_err(|(cond, w)| {
        Error::Structure(format!(
            "block decomposition requires conditions 1-4; condition {cond} fails at {w}"
        ))
    })?;
    Ok(decompose_unchecked(a, shape.s, shape.t))
}

fn decompose_unchecked(a: &BinaryMatrix, s: usize, t: usize) -> BlockDecomposition {
    let n = a.nrows();
    let m = a.ncols();
    let tail_mask = low_ones(s as u32);
    let b_rows: Vec<Code> = (t..n).map(|i| a.row(i) >> s).collect();
    let c_rows: Vec<Code> = (t..n).map(|i| a.row(i) & tail_mask).collect();
    let b = BinaryMatrix::from_rows(m - s, b_rows).expect("B block fits");
    let c = BinaryMatrix::from_rows(s, c_rows).expect("C block fits");
    // Sorted rows stay sorted after dropping the tail columns, and the top
    // of B cannot be all-zero while rows below the lead run exceed 2^s - 1.
    debug_assert!(b.rows_sorted());
    debug_assert!(t == n || b.row(0) != 0);
    let e_rows = vec![low_ones(s as u32); t];
    BlockDecomposition {
        s,
        t,
        o: BinaryMatrix::zero(t, m - s).expect("O block fits"),
        e: BinaryMatrix::from_rows(s, e_rows).expect("E block fits"),
        b,
        c,
    }
}

fn build_competitor(a: &BinaryMatrix, run_start: usize, s: usize, t: usize) -> BinaryMatrix {
    let n = a.nrows();
    let m = a.ncols();
    let mut row_images: Vec<usize> = (0..n).collect();
    for k in 0..t {
        row_images[k] = run_start + k;
        row_images[run_start + k] = k;
    }
    // Columns carrying the moved rows' ones go to the last s slots in
    // ascending order; the displaced columns fill the head, also ascending.
    let x = a.row(run_start);
    let mut col_images = vec![0usize; m];
    let mut head = 0;
    let mut tail = m - s;
    for (j, image) in col_images.iter_mut().enumerate() {
        if (x >> (m - 1 - j)) & 1 == 1 {
            *image = tail;
            tail += 1;
        } else {
            *image = head;
            head += 1;
        }
    }
    let rho = Permutation::from_images(row_images).expect("block swap is a permutation");
    let sigma = Permutation::from_images(col_images).expect("column move is a permutation");
    apply_perms(a, &rho, &sigma).expect("sizes match by construction")
}

/// Builds the row/column rearrangement for an eligible row `i` (0-based):
/// the leading run swaps places with the run containing `i`, and the moved
/// rows' ones columns move to the tail in ascending order, displaced
/// columns closing ranks. Requires conditions 1-5 and an eligible `i` (a
/// row past the leading run with the same ones count and multiplicity).
///
/// The result is always equivalent to `a`, and `r(A') < r(A)` proves `a`
/// non-canonical. The converse does not hold: this single rearrangement is
/// not always the best its family can do, so [`is_canonical`] decides
/// condition 6 with an exact search instead.
pub fn condition6_competitor(a: &BinaryMatrix, i: usize) -> Result<BinaryMatrix> {
    if a.is_empty() || i >= a.nrows() {
        return Err(Error::Domain(format!(
            "row index {i} out of range for a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let shape = check_conditions_1_to_4(a)
        .map_err(|(cond, w)| Error::Domain(format!("condition {cond} fails at {w}")))?;
    if let Some((j, k)) = tail_column_disorder(a, shape.s) {
        return Err(Error::Domain(format!(
            "condition 5 fails at columns {} and {}",
            j + 1,
            k + 1
        )));
    }
    let run = shape
        .blocks
        .iter()
        .find(|r| i >= r.start && i < r.start + r.len)
        .copied()
        .expect("every row lies in a run");
    if run.start == 0 {
        return Err(Error::Domain(format!(
            "row {} lies in the leading run and is not an eligible competitor",
            i + 1
        )));
    }
    if run.value.count_ones() as usize != shape.s || run.len != shape.t {
        return Err(Error::Domain(format!(
            "row {} is not eligible: needs {} ones and multiplicity {}",
            i + 1,
            shape.s,
            shape.t
        )));
    }
    Ok(build_competitor(a, run.start, shape.s, shape.t))
}

/// First out-of-order pair among the last `s` column codes, if any.
fn tail_column_disorder(a: &BinaryMatrix, s: usize) -> Option<(usize, usize)> {
    let m = a.ncols();
    let cols = a.col_code();
    let y = cols.values();
    (m - s..m.saturating_sub(1)).find_map(|j| (y[j] > y[j + 1]).then_some((j, j + 1)))
}

/// Minimal value the row can take under the partition: within each block,
/// its zeros move to the significant side and its ones pack at the bottom.
#[inline]
fn code_under(w: Code, partition: &[Code]) -> Code {
    let mut code = 0;
    for &block in partition {
        let size = block.count_ones();
        code = (code << size) | low_ones((w & block).count_ones());
    }
    code
}

/// Splits every block into its zero columns (kept significant) and its one
/// columns: the admissible column permutations after placing row `w` on top
/// in minimal form.
fn refine(partition: &[Code], w: Code) -> Vec<Code> {
    let mut refined = Vec::with_capacity(partition.len() + 1);
    for &block in partition {
        let zeros = block & !w;
        let ones = block & w;
        if zeros != 0 {
            refined.push(zeros);
        }
        if ones != 0 {
            refined.push(ones);
        }
    }
    refined
}

/// Decides canonicity via the recursive seven-condition test.
pub fn is_canonical(a: &BinaryMatrix) -> CanonicityReport {
    check_canonicity(a, true, 0)
}

/// Same test with the early-accept shortcut for all-equal-rows matrices
/// optionally disabled, so tests can force the full condition chain.
pub(crate) fn check_canonicity(a: &BinaryMatrix, shortcuts: bool, depth: usize) -> CanonicityReport {
    if a.is_empty() {
        return CanonicityReport::ok();
    }
    let rows = a.row_slice();
    if let Some(i) = (0..rows.len() - 1).find(|&i| rows[i] > rows[i + 1]) {
        return CanonicityReport::fail(1, Witness::Row(i + 1), depth);
    }
    let m = a.ncols();
    check_level(rows, &[low_ones(m as u32)], m, Some(a), shortcuts, depth)
}

/// One level of the recursion: the remaining `rows` (still sorted) must be
/// the lexicographically least arrangement of themselves over row order and
/// partition-respecting column permutations. `top` carries the original
/// matrix at depth 0 only, for the condition-5 column check.
///
/// Exactness sketch: under any admissible column permutation at most one
/// row-value class attains the level minimum `cmin` (two different classes
/// would need their ones on the same positions), so the least arrangement
/// starts with a largest such class, placed as `cmin` repeated; afterwards
/// the admissible permutations are exactly those respecting the refined
/// partition, and no remaining row attains `cmin` under it, which makes the
/// residual an independent subproblem of the same form.
fn check_level(
    rows: &[Code],
    partition: &[Code],
    m: usize,
    top: Option<&BinaryMatrix>,
    shortcuts: bool,
    depth: usize,
) -> CanonicityReport {
    if rows.is_empty() {
        return CanonicityReport::ok();
    }
    let x1 = rows[0];
    // Conditions 2 and 3: the first row must be in its own minimal form and
    // no row may reach a smaller form.
    if code_under(x1, partition) != x1 {
        return CanonicityReport::fail(2, Witness::Row(0), depth);
    }
    let mut cmin = x1;
    let mut arg = 0;
    for (i, &w) in rows.iter().enumerate().skip(1) {
        let c = code_under(w, partition);
        if c < cmin {
            cmin = c;
            arg = i;
        }
    }
    if cmin < x1 {
        return CanonicityReport::fail(3, Witness::Row(arg), depth);
    }

    let t = rows.iter().take_while(|&&w| w == x1).count();
    if shortcuts && t == rows.len() {
        // All rows equal and already minimal: nothing can improve.
        return CanonicityReport::ok();
    }

    // Condition 4 and the condition-6 candidates: later runs whose value
    // also reaches cmin.
    let mut rivals: Vec<usize> = Vec::new();
    let mut i = t;
    while i < rows.len() {
        let w = rows[i];
        let len = rows[i..].iter().take_while(|&&x| x == w).count();
        if code_under(w, partition) == cmin {
            if len > t {
                return CanonicityReport::fail(4, Witness::Row(i), depth);
            }
            if len == t {
                rivals.push(i);
            }
        }
        i += len;
    }

    if let Some(a) = top {
        let s = x1.count_ones() as usize;
        if let Some((j, k)) = tail_column_disorder(a, s) {
            return CanonicityReport::fail(5, Witness::ColumnPair(j, k), depth);
        }
    }

    // Condition 6: a rival run taking over the leading block starts with the
    // same t copies of cmin, so it wins exactly when the best arrangement of
    // the remaining rows under its refined partition beats our tail.
    let tail = &rows[t..];
    for start in rivals {
        let w = rows[start];
        let mut others: Vec<Code> = Vec::with_capacity(rows.len() - t);
        others.extend_from_slice(&rows[..start]);
        others.extend_from_slice(&rows[start + t..]);
        let family = min_rows_search(&others, refine(partition, w), Some(tail.to_vec()), u64::MAX)
            .expect("unlimited search cannot hit its node limit");
        if family.as_slice() < tail {
            let mut full = vec![x1; t];
            full.extend_from_slice(&family);
            let matrix = BinaryMatrix::from_rows(m, full).expect("codes fit width");
            return CanonicityReport::fail(6, Witness::Competitor { row: start, matrix }, depth);
        }
    }

    // Condition 7: strip the leading block and recurse with the refined
    // partition, so the residual head and tail columns stay coupled.
    if t < rows.len() {
        debug_assert!(rows[t..].windows(2).all(|w| w[0] <= w[1]));
        let inner = check_level(&rows[t..], &refine(partition, x1), m, None, shortcuts, depth + 1);
        if !inner.is_canonical {
            return inner;
        }
    }
    CanonicityReport::ok()
}

/// Node budget for [`canonicalize`]'s search. Generous for the word-sized
/// matrices this crate handles; highly symmetric larger inputs can exceed it
/// and get a resource error instead of an open-ended search.
pub const DEFAULT_NODE_LIMIT: u64 = 1 << 22;

/// The canonical representative of `a`'s equivalence class.
pub fn canonicalize(a: &BinaryMatrix) -> Result<BinaryMatrix> {
    canonicalize_with(a, DEFAULT_NODE_LIMIT)
}

/// [`canonicalize`] with an explicit search node limit.
pub fn canonicalize_with(a: &BinaryMatrix, node_limit: u64) -> Result<BinaryMatrix> {
    if a.is_empty() || is_canonical(a).is_canonical {
        return Ok(a.clone());
    }
    let rows = min_rows_search(
        a.row_slice(),
        vec![low_ones(a.ncols() as u32)],
        None,
        node_limit,
    )?;
    BinaryMatrix::from_rows(a.ncols(), rows)
}

/// Least row-code tuple reachable from `rows` by reordering rows and
/// permuting columns within the ordered `partition`. When `seed` is given
/// the search returns the minimum of the seed and everything it visits,
/// pruning against it.
fn min_rows_search(
    rows: &[Code],
    partition: Vec<Code>,
    seed: Option<Vec<Code>>,
    node_limit: u64,
) -> Result<Vec<Code>> {
    let mut search = MinSearch {
        rows,
        node_limit,
        nodes: 0,
        best: seed,
        prefix: Vec::with_capacity(rows.len()),
        used: 0,
    };
    search.dfs(&partition)?;
    Ok(search.best.expect("search yields a tuple"))
}

/// Branch-and-bound over target row choices. The partition tracks the
/// admissible column permutations (ordered blocks, most significant first,
/// free inside each block); placing a row refines it by splitting every
/// block into the row's zero columns (kept significant) and one columns,
/// which is exactly what makes the placed row's code minimal.
struct MinSearch<'a> {
    rows: &'a [Code],
    node_limit: u64,
    nodes: u64,
    best: Option<Vec<Code>>,
    prefix: Vec<Code>,
    used: u64,
}

impl MinSearch<'_> {
    fn dfs(&mut self, partition: &[Code]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::Resource(format!(
                "canonical-form search exceeded the {}-node limit",
                self.node_limit
            )));
        }
        let k = self.prefix.len();
        if k == self.rows.len() {
            if self.best.as_ref().is_none_or(|b| self.prefix < *b) {
                self.best = Some(self.prefix.clone());
            }
            return Ok(());
        }

        let unused = || (0..self.rows.len()).filter(|i| self.used >> i & 1 == 0);
        let cmin = unused()
            .map(|i| code_under(self.rows[i], partition))
            .min()
            .expect("at least one unused row");
        if let Some(best) = &self.best {
            // Only binding while the prefix still ties the incumbent.
            if self.prefix[..] == best[..k] && cmin > best[k] {
                return Ok(());
            }
        }

        let mut tried: Vec<Code> = Vec::new();
        for i in unused().collect::<Vec<_>>() {
            let w = self.rows[i];
            if code_under(w, partition) != cmin || tried.contains(&w) {
                continue; // equal source rows lead to identical subtrees
            }
            tried.push(w);
            let refined = refine(partition, w);
            self.prefix.push(cmin);
            self.used |= 1 << i;
            let res = self.dfs(&refined);
            self.used &= !(1 << i);
            self.prefix.pop();
            res?;
        }
        Ok(())
    }
}

/// Result of checking one shape in the oracle-agreement sweep.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub n: usize,
    pub m: usize,
    /// Number of matrices checked (all 2^(n·m) of them).
    pub checked: u64,
    pub mismatches: u64,
    /// Smallest offending matrix by row code, when any mismatch exists.
    pub first_mismatch: Option<BinaryMatrix>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Exhaustively compares the seven-condition verdict with the brute-force
/// definition over every n×m matrix: `is_canonical(A)` must hold exactly
/// when `A` equals its orbit minimum. Runs on the current rayon pool.
pub fn oracle_agreement_sweep(
    n: usize,
    m: usize,
    budget: &crate::oracle::Budget,
) -> Result<SweepOutcome> {
    if n > budget.max_rows || m > budget.max_cols || n * m > budget.max_cells {
        return Err(Error::Resource(format!(
            "sweep budget exceeded for shape {n}x{m}: budget allows at most {} rows, \
             {} columns and {} cells",
            budget.max_rows, budget.max_cols, budget.max_cells
        )));
    }
    let total: u64 = 1u64 << (n * m);
    let sigmas = col_perms(m);
    let chunk: u64 = 1 << 12;
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let (mismatches, first) = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(total);
            let mut bad = 0u64;
            let mut first: Option<BinaryMatrix> = None;
            for bits in start..end {
                let mat = BinaryMatrix::from_cell_bits(n, m, bits);
                let fast = is_canonical(&mat).is_canonical;
                let truth = min_orbit_rows(&mat, &sigmas) == mat.row_slice();
                if fast != truth {
                    bad += 1;
                    first.get_or_insert(mat);
                }
            }
            (bad, first)
        })
        .reduce(
            || (0, None),
            |(c1, f1), (c2, f2)| {
                let first = match (f1, f2) {
                    (Some(a), Some(b)) => Some(if a <= b { a } else { b }),
                    (a, b) => a.or(b),
                };
                (c1 + c2, first)
            },
        );
    Ok(SweepOutcome { n, m, checked: total, mismatches, first_mismatch: first })
}
