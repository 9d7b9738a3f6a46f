//! Generation and counting of semi-canonical and canonical matrices.
//!
//! Both streams walk nondecreasing row-code tuples by backtracking. Column
//! monotonicity prunes during descent: once two adjacent columns compare
//! strict-greater on a prefix of rows, no completion can repair it, so the
//! whole subtree dies. The canonical stream additionally prunes with the
//! prefix-decidable canonicity conditions (first row a ones stair, no row
//! lighter than the first, no same-weight run longer than the leading run)
//! and runs the full canonicity test on surviving leaves; the remaining
//! conditions are not prefix-local.

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::is_canonical;
use crate::error::Result;
use crate::matrix::{ensure_dims, BinaryMatrix, Code};

/// Counts of one shape's matrices, stratified by number of ones.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CountTable {
    pub n: usize,
    pub m: usize,
    /// `by_ones[k]` counts matrices with exactly `k` ones; length `n*m + 1`.
    pub by_ones: Vec<u64>,
    pub total: u64,
}

impl CountTable {
    fn new(n: usize, m: usize, by_ones: Vec<u64>) -> Self {
        let total = by_ones.iter().sum();
        CountTable { n, m, by_ones, total }
    }

    /// One `k,count` line per ones count, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, count) in self.by_ones.iter().enumerate() {
            out.push_str(&format!("{k},{count}\n"));
        }
        out
    }

    /// Compact JSON: `{"n":..,"m":..,"by_ones":[..],"total":..}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("count table serializes")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Semi,
    Canonical,
}

#[inline]
fn low_ones(k: u32) -> Code {
    if k == 0 {
        0
    } else {
        (1u64 << k) - 1
    }
}

/// Bit j (from the low end) stands for the adjacent column pair (j, j+1)
/// counted from the right; only bits 0..m-1 are meaningful.
#[inline]
fn pair_mask(m: usize) -> u64 {
    if m <= 1 {
        0
    } else {
        (1u64 << (m - 1)) - 1
    }
}

/// Pairs where this row has 1 on the left column and 0 on the right: any
/// such pair still undecided becomes strict-greater, killing the branch.
#[inline]
fn gt_pairs(v: Code) -> u64 {
    (v >> 1) & !v
}

/// Pairs this row decides strict-less (0 left, 1 right).
#[inline]
fn lt_pairs(v: Code) -> u64 {
    v & !(v >> 1)
}

/// Prefix-decidable canonicity conditions for appending `v` to `rows`.
fn canonical_prefix_ok(rows: &[Code], v: Code) -> bool {
    let Some(&first) = rows.first() else {
        // First row must be a stair of 0s then 1s.
        return v == low_ones(v.count_ones());
    };
    let s = first.count_ones();
    if v.count_ones() < s {
        return false;
    }
    if v == first {
        return true; // still extending the leading run
    }
    if v.count_ones() == s {
        // A later run of leading weight may not outgrow the leading run.
        let t = rows.iter().take_while(|&&x| x == first).count();
        let run = rows.iter().rev().take_while(|&&x| x == v).count();
        if run + 1 > t {
            return false;
        }
    }
    true
}

fn admissible(mode: Mode, rows: &[Code], undecided: u64, v: Code) -> bool {
    if gt_pairs(v) & undecided != 0 {
        return false;
    }
    mode == Mode::Semi || canonical_prefix_ok(rows, v)
}

fn leaf_ok(mode: Mode, m: usize, rows: &[Code]) -> bool {
    match mode {
        Mode::Semi => true,
        Mode::Canonical => {
            let a = BinaryMatrix::from_rows(m, rows.to_vec()).expect("rows fit width");
            is_canonical(&a).is_canonical
        }
    }
}

/// Recursive subtree visitor; `f` receives each surviving complete tuple
/// together with its total ones count.
fn visit(
    n: usize,
    m: usize,
    mode: Mode,
    rows: &mut Vec<Code>,
    undecided: u64,
    ones: u32,
    f: &mut impl FnMut(&[Code], u32),
) {
    if rows.len() == n {
        if leaf_ok(mode, m, rows) {
            f(rows, ones);
        }
        return;
    }
    let lo = rows.last().copied().unwrap_or(0);
    let max = low_ones(m as u32);
    for v in lo..=max {
        if !admissible(mode, rows, undecided, v) {
            continue;
        }
        rows.push(v);
        visit(n, m, mode, rows, undecided & !lt_pairs(v), ones + v.count_ones(), f);
        rows.pop();
    }
}

struct Seed {
    rows: Vec<Code>,
    undecided: u64,
    ones: u32,
}

/// Admissible prefixes of the given depth, in stream order. Each seed's
/// subtree is independent, which is what the parallel counters fan out over.
fn collect_seeds(n: usize, m: usize, mode: Mode, depth: usize) -> Vec<Seed> {
    fn rec(
        n: usize,
        m: usize,
        mode: Mode,
        depth: usize,
        rows: &mut Vec<Code>,
        undecided: u64,
        ones: u32,
        out: &mut Vec<Seed>,
    ) {
        if rows.len() == depth {
            out.push(Seed { rows: rows.clone(), undecided, ones });
            return;
        }
        let lo = rows.last().copied().unwrap_or(0);
        let max = low_ones(m as u32);
        for v in lo..=max {
            if !admissible(mode, rows, undecided, v) {
                continue;
            }
            rows.push(v);
            rec(n, m, mode, depth, rows, undecided & !lt_pairs(v), ones + v.count_ones(), out);
            rows.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, mode, depth, &mut Vec::new(), pair_mask(m), 0, &mut out);
    out
}

/// Counts by ones, fanning subtrees out over the current rayon pool.
/// Partition sums are merged in seed order, so the result is identical for
/// any worker count.
fn count_table(n: usize, m: usize, mode: Mode) -> Result<CountTable> {
    ensure_dims(n, m)?;
    let cells = n * m;
    let seed_depth = n.min(2);
    let seeds = collect_seeds(n, m, mode, seed_depth);
    let by_ones = seeds
        .into_par_iter()
        .map(|seed| {
            let mut local = vec![0u64; cells + 1];
            let mut rows = seed.rows;
            visit(n, m, mode, &mut rows, seed.undecided, seed.ones, &mut |_, ones| {
                local[ones as usize] += 1;
            });
            local
        })
        .reduce(
            || vec![0u64; cells + 1],
            |mut acc, local| {
                for (a, b) in acc.iter_mut().zip(&local) {
                    *a += b;
                }
                acc
            },
        );
    Ok(CountTable::new(n, m, by_ones))
}

/// Number of n×m semi-canonical matrices with k ones, for every k.
pub fn count_semi_canonical(n: usize, m: usize) -> Result<CountTable> {
    count_table(n, m, Mode::Semi)
}

/// Number of n×m canonical matrices with k ones, for every k. The total is
/// the number of part-preserving isomorphism classes of bipartite graphs.
pub fn count_canonical(n: usize, m: usize) -> Result<CountTable> {
    count_table(n, m, Mode::Canonical)
}

/// Streams all n×m semi-canonical matrices in increasing row-code order.
pub fn enumerate_semi_canonical(n: usize, m: usize) -> Result<MatrixStream> {
    MatrixStream::new(n, m, Mode::Semi)
}

/// Streams all n×m canonical matrices in increasing row-code order.
pub fn enumerate_canonical(n: usize, m: usize) -> Result<MatrixStream> {
    MatrixStream::new(n, m, Mode::Canonical)
}

/// Lazy backtracking iterator behind the two `enumerate_*` functions.
pub struct MatrixStream {
    n: usize,
    m: usize,
    mode: Mode,
    rows: Vec<Code>,
    /// cursor[k]: next value to try at depth k.
    cursor: Vec<Code>,
    /// undecided[k]: open column pairs before choosing row k.
    undecided: Vec<u64>,
    done: bool,
}

impl MatrixStream {
    fn new(n: usize, m: usize, mode: Mode) -> Result<MatrixStream> {
        ensure_dims(n, m)?;
        Ok(MatrixStream {
            n,
            m,
            mode,
            rows: Vec::with_capacity(n),
            cursor: vec![0; n.max(1)],
            undecided: {
                let mut u = vec![0; n + 1];
                u[0] = pair_mask(m);
                u
            },
            done: false,
        })
    }
}

impl Iterator for MatrixStream {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(BinaryMatrix::zero(0, self.m).expect("dims checked"));
        }
        let max = low_ones(self.m as u32);
        loop {
            let k = self.rows.len();
            let mut v = self.cursor[k];
            let found = loop {
                if v > max {
                    break None;
                }
                if admissible(self.mode, &self.rows, self.undecided[k], v) {
                    break Some(v);
                }
                v += 1;
            };
            let Some(v) = found else {
                if k == 0 {
                    self.done = true;
                    return None;
                }
                self.rows.pop();
                continue;
            };
            self.cursor[k] = v + 1;
            self.rows.push(v);
            self.undecided[k + 1] = self.undecided[k] & !lt_pairs(v);
            if self.rows.len() == self.n {
                let mat = BinaryMatrix::from_rows(self.m, self.rows.clone())
                    .expect("rows fit width");
                self.rows.pop();
                if leaf_ok(self.mode, self.m, mat.row_slice()) {
                    return Some(mat);
                }
            } else {
                self.cursor[k + 1] = v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::is_semi_canonical;
    use crate::oracle::{count_classes, Budget};

    #[test]
    fn beta_2_and_3_match_published_counts() {
        let t2 = count_semi_canonical(2, 2).unwrap();
        assert_eq!(t2.by_ones, vec![1, 1, 3, 1, 1]);
        assert_eq!(t2.total, 7);
        let t3 = count_semi_canonical(3, 3).unwrap();
        assert_eq!(t3.by_ones, vec![1, 1, 3, 8, 10, 9, 8, 3, 1, 1]);
        assert_eq!(t3.total, 45);
    }

    #[test]
    fn one_by_one_counts() {
        let t = count_semi_canonical(1, 1).unwrap();
        assert_eq!(t.by_ones, vec![1, 1]);
        let c = count_canonical(1, 1).unwrap();
        assert_eq!(c.total, 2);
    }

    #[test]
    fn semi_stream_equals_filtered_scan() {
        for (n, m) in [(2, 2), (3, 3), (2, 4), (4, 3)] {
            let streamed: Vec<BinaryMatrix> = enumerate_semi_canonical(n, m).unwrap().collect();
            let filtered: Vec<BinaryMatrix> = BinaryMatrix::all(n, m)
                .unwrap()
                .filter(is_semi_canonical)
                .collect();
            assert_eq!(streamed, filtered, "shape {n}x{m}");
        }
    }

    #[test]
    fn canonical_stream_is_exactly_the_canonical_filter() {
        for (n, m) in [(2, 2), (3, 3), (2, 4)] {
            let streamed: Vec<BinaryMatrix> = enumerate_canonical(n, m).unwrap().collect();
            let filtered: Vec<BinaryMatrix> = BinaryMatrix::all(n, m)
                .unwrap()
                .filter(|a| is_canonical(a).is_canonical)
                .collect();
            assert_eq!(streamed, filtered, "shape {n}x{m}");
        }
    }

    #[test]
    fn canonical_stream_small_examples() {
        let codes: Vec<Vec<Code>> = enumerate_canonical(1, 2)
            .unwrap()
            .map(|a| a.row_slice().to_vec())
            .collect();
        assert_eq!(codes, vec![vec![0], vec![1], vec![3]]);
        assert_eq!(enumerate_canonical(2, 2).unwrap().count(), 7);
    }

    #[test]
    fn canonical_counts_match_oracle_classes() {
        let budget = Budget::default();
        for (n, m) in [(1, 1), (2, 2), (2, 3), (3, 3), (2, 4), (4, 2)] {
            assert_eq!(
                count_canonical(n, m).unwrap().total,
                count_classes(n, m, &budget).unwrap(),
                "shape {n}x{m}"
            );
        }
    }

    #[test]
    fn canonical_is_subset_of_semi() {
        let semi: Vec<BinaryMatrix> = enumerate_semi_canonical(3, 3).unwrap().collect();
        for a in enumerate_canonical(3, 3).unwrap() {
            assert!(semi.contains(&a));
        }
        assert!(semi.len() >= enumerate_canonical(3, 3).unwrap().count());
    }

    #[test]
    fn counts_agree_with_streams() {
        for (n, m) in [(3, 3), (2, 4)] {
            let table = count_semi_canonical(n, m).unwrap();
            let mut by_ones = vec![0u64; n * m + 1];
            for a in enumerate_semi_canonical(n, m).unwrap() {
                by_ones[a.ones() as usize] += 1;
            }
            assert_eq!(table.by_ones, by_ones);
        }
    }

    #[test]
    fn transpose_duality_of_totals() {
        for (n, m) in [(2, 3), (1, 3), (2, 4)] {
            assert_eq!(
                count_canonical(n, m).unwrap().total,
                count_canonical(m, n).unwrap().total
            );
        }
    }

    #[test]
    fn empty_shapes() {
        for (n, m) in [(0, 3), (3, 0), (0, 0)] {
            let t = count_semi_canonical(n, m).unwrap();
            assert_eq!(t.by_ones, vec![1]);
            assert_eq!(t.total, 1);
            assert_eq!(enumerate_canonical(n, m).unwrap().count(), 1);
        }
    }

    #[test]
    fn identical_tables_for_any_worker_count() {
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| count_semi_canonical(4, 4).unwrap());
        let b = pool4.install(|| count_semi_canonical(4, 4).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn table_serialization() {
        let t = count_semi_canonical(2, 2).unwrap();
        assert_eq!(t.to_csv(), "0,1\n1,1\n2,3\n3,1\n4,1\n");
        assert_eq!(
            t.to_json(),
            r#"{"n":2,"m":2,"by_ones":[1,1,3,1,1],"total":7}"#
        );
    }
}
