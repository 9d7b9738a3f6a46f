//! Bipartite graphs, their binary-matrix encoding, and isomorphism testing
//! through canonical forms.
//!
//! A graph here is two disjoint vertex parts of sizes n and m plus a set of
//! edges between them. Encoding the graph as its n×m biadjacency matrix
//! turns part-preserving isomorphism into row/column-permutation
//! equivalence of matrices, so two graphs are isomorphic exactly when their
//! matrices share a canonical form.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::canonical::canonicalize;
use crate::error::{Error, Result};
use crate::matrix::{ensure_dims, BinaryMatrix, RowCode};
use crate::perm::Permutation;

/// Two disjoint vertex parts of sizes n and m with edges between them.
/// Vertices are indexed 0..n and 0..m; the index spaces are separate, so
/// the parts are disjoint by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BipartiteGraph {
    n: usize,
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    /// Builds a graph from `(left, right)` edge pairs, 0-based. Duplicate
    /// or out-of-range edges are rejected.
    pub fn new(
        n: usize,
        m: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        ensure_dims(n, m)?;
        let mut set = BTreeSet::new();
        for (r, c) in edges {
            if r >= n || c >= m {
                return Err(Error::Domain(format!(
                    "edge ({r},{c}) out of range for parts of sizes {n} and {m}"
                )));
            }
            if !set.insert((r, c)) {
                return Err(Error::Domain(format!("duplicate edge ({r},{c})")));
            }
        }
        Ok(BipartiteGraph { n, m, edges: set })
    }

    /// Size of the left part.
    pub fn left_size(&self) -> usize {
        self.n
    }

    /// Size of the right part.
    pub fn right_size(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// The biadjacency matrix: entry (i, j) is 1 exactly on edges.
    pub fn to_matrix(&self) -> BinaryMatrix {
        let m = self.m;
        let mut rows = vec![0u64; self.n];
        for &(r, c) in &self.edges {
            rows[r] |= 1 << (m - 1 - c);
        }
        BinaryMatrix::from_rows(m, rows).expect("edges validated at construction")
    }

    /// Inverse of [`BipartiteGraph::to_matrix`].
    pub fn from_matrix(a: &BinaryMatrix) -> BipartiteGraph {
        let edges = (0..a.nrows())
            .flat_map(|i| (0..a.ncols()).filter(move |&j| a.get(i, j)).map(move |j| (i, j)))
            .collect();
        BipartiteGraph { n: a.nrows(), m: a.ncols(), edges }
    }

    /// Renames vertices: left vertex `r` becomes `rho(r)`, right vertex `c`
    /// becomes `sigma(c)`. The result is isomorphic to `self`.
    pub fn relabel(&self, rho: &Permutation, sigma: &Permutation) -> Result<BipartiteGraph> {
        if rho.len() != self.n || sigma.len() != self.m {
            return Err(Error::Domain(format!(
                "permutation sizes ({}, {}) do not match parts ({}, {})",
                rho.len(),
                sigma.len(),
                self.n,
                self.m
            )));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(r, c)| (rho.apply(r), sigma.apply(c)))
            .collect();
        Ok(BipartiteGraph { n: self.n, m: self.m, edges })
    }
}

/// Part-preserving isomorphism: left vertices map to left vertices. Shape
/// mismatch is a `false` verdict, not an error.
pub fn isomorphic(g: &BipartiteGraph, h: &BipartiteGraph) -> Result<bool> {
    if g.n != h.n || g.m != h.m {
        return Ok(false);
    }
    if g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonicalize(&g.to_matrix())? == canonicalize(&h.to_matrix())?)
}

/// Which reading of the parts made two graphs isomorphic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// Left part to left part, right to right.
    Same,
    /// `h` matched after exchanging its parts.
    Swapped,
}

/// Isomorphism allowing the parts of `h` to be exchanged. Tries the
/// part-preserving reading first.
pub fn isomorphic_either(g: &BipartiteGraph, h: &BipartiteGraph) -> Result<Option<Orientation>> {
    if isomorphic(g, h)? {
        return Ok(Some(Orientation::Same));
    }
    let swapped = BipartiteGraph::from_matrix(&h.to_matrix().transpose());
    if isomorphic(g, &swapped)? {
        return Ok(Some(Orientation::Swapped));
    }
    Ok(None)
}

/// Hashable class identifier: the row code of the canonical form. For a
/// fixed shape, two graphs share a key exactly when they are isomorphic.
pub fn canonical_key(g: &BipartiteGraph) -> Result<RowCode> {
    Ok(canonicalize(&g.to_matrix())?.row_code())
}

/// Graph text format: `n m e` header, then e lines `r c` with 1-based
/// vertex indices. The writer emits edges in row-major order.
impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.m, self.edges.len())?;
        for &(r, c) in &self.edges {
            writeln!(f, "{} {}", r + 1, c + 1)?;
        }
        Ok(())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.split('\n');
        let header = lines.next().unwrap_or("").trim_end_matches('\r');
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: 1,
                message: "expected header `n m e`".into(),
            });
        }
        let parse = |tok: &str, what: &str| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                message: format!("invalid {what} in header"),
            })
        };
        let n = parse(fields[0], "left part size")?;
        let m = parse(fields[1], "right part size")?;
        let e = parse(fields[2], "edge count")?;
        ensure_dims(n, m).map_err(|err| Error::Parse { line: 1, message: err.to_string() })?;

        let mut edges = BTreeSet::new();
        for k in 0..e {
            let line_no = k + 2;
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("missing edge {} of {e}", k + 1),
                })?
                .trim_end_matches('\r');
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected edge line `r c`".into(),
                });
            }
            let bad = |what: &str| Error::Parse {
                line: line_no,
                message: format!("invalid {what} vertex"),
            };
            let r = fields[0].parse::<usize>().map_err(|_| bad("left"))?;
            let c = fields[1].parse::<usize>().map_err(|_| bad("right"))?;
            if r == 0 || r > n || c == 0 || c > m {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "edge ({r},{c}) out of range for parts of sizes {n} and {m}"
                    ),
                });
            }
            if !edges.insert((r - 1, c - 1)) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate edge ({r},{c})"),
                });
            }
        }
        for (extra, line) in lines.enumerate() {
            if !line.trim().is_empty() {
                return Err(Error::Parse {
                    line: e + 2 + extra,
                    message: "unexpected content after last edge".into(),
                });
            }
        }
        Ok(BipartiteGraph { n, m, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    /// The worked 3+4 example graph: r1-c1, r1-c2, r2-c1, r2-c2, r2-c3, r3-c4.
    fn figure_graph() -> BipartiteGraph {
        BipartiteGraph::new(3, 4, [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn figure_graph_matrix_codes() {
        let a = figure_graph().to_matrix();
        assert_eq!(a.row_code().values(), &[12, 14, 1]);
        assert_eq!(a.col_code().values(), &[6, 6, 2, 1]);
    }

    #[test]
    fn matrix_round_trips() {
        assert_eq!(
            BipartiteGraph::from_matrix(&figure_graph().to_matrix()),
            figure_graph()
        );
        let edgeless = BipartiteGraph::new(2, 3, []).unwrap();
        assert_eq!(edgeless.to_matrix(), BinaryMatrix::zero(2, 3).unwrap());
        let complete = BipartiteGraph::new(2, 3, (0..2).flat_map(|r| (0..3).map(move |c| (r, c))))
            .unwrap();
        assert_eq!(complete.to_matrix(), matrix![[1, 1, 1], [1, 1, 1]]);
        for a in BinaryMatrix::all(2, 3).unwrap() {
            assert_eq!(BipartiteGraph::from_matrix(&a).to_matrix(), a);
        }
    }

    #[test]
    fn isomorphism_of_worked_example_pair() {
        let a = matrix![[0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 0, 0], [1, 0, 0, 0]];
        let b = matrix![[0, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 0]];
        let g = BipartiteGraph::from_matrix(&a);
        let h = BipartiteGraph::from_matrix(&b);
        assert!(isomorphic(&g, &h).unwrap());
    }

    #[test]
    fn relabeling_preserves_isomorphism() {
        let g = figure_graph();
        for rho in Permutation::all(3) {
            let relabeled = g.relabel(&rho, &Permutation::identity(4)).unwrap();
            assert!(isomorphic(&g, &relabeled).unwrap());
        }
    }

    #[test]
    fn different_edge_counts_never_isomorphic() {
        let g = BipartiteGraph::new(2, 2, [(0, 0)]).unwrap();
        let h = BipartiteGraph::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert!(!isomorphic(&g, &h).unwrap());
        // Shape mismatch is false, not an error.
        let wide = BipartiteGraph::new(2, 3, [(0, 0)]).unwrap();
        assert!(!isomorphic(&g, &wide).unwrap());
    }

    #[test]
    fn either_orientation_detects_transposed_match() {
        let g = BipartiteGraph::from_matrix(&matrix![[1, 1, 0], [0, 0, 1]]);
        let h = BipartiteGraph::from_matrix(&matrix![[1, 0], [1, 0], [0, 1]]);
        assert!(!isomorphic(&g, &h).unwrap());
        assert_eq!(isomorphic_either(&g, &h).unwrap(), Some(Orientation::Swapped));
        assert_eq!(isomorphic_either(&g, &g).unwrap(), Some(Orientation::Same));
        let lone = BipartiteGraph::new(2, 3, [(0, 0)]).unwrap();
        assert_eq!(isomorphic_either(&lone, &h).unwrap(), None);
    }

    #[test]
    fn canonical_keys_identify_classes() {
        let edgeless = BipartiteGraph::new(3, 4, []).unwrap();
        assert_eq!(canonical_key(&edgeless).unwrap().values(), &[0, 0, 0]);
        let g = figure_graph();
        for rho in Permutation::all(3).step_by(2) {
            for sigma in Permutation::all(4).step_by(5) {
                let relabeled = g.relabel(&rho, &sigma).unwrap();
                assert_eq!(canonical_key(&relabeled).unwrap(), canonical_key(&g).unwrap());
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let g = figure_graph();
        let text = g.to_string();
        assert_eq!(text.lines().next(), Some("3 4 6"));
        assert_eq!(text.parse::<BipartiteGraph>().unwrap(), g);
        let edgeless = BipartiteGraph::new(2, 2, []).unwrap();
        assert_eq!(edgeless.to_string().parse::<BipartiteGraph>().unwrap(), edgeless);
    }

    #[test]
    fn text_format_errors() {
        let dup = "2 2 2\n1 1\n1 1\n".parse::<BipartiteGraph>().unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, .. }));
        let range = "2 2 1\n3 1\n".parse::<BipartiteGraph>().unwrap_err();
        assert!(matches!(range, Error::Parse { line: 2, .. }));
        let missing = "2 2 2\n1 1\n".parse::<BipartiteGraph>().unwrap_err();
        assert!(matches!(missing, Error::Parse { line: 3, .. }));
        let header = "2 2\n".parse::<BipartiteGraph>().unwrap_err();
        assert!(matches!(header, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn duplicate_programmatic_edges_rejected() {
        assert!(BipartiteGraph::new(2, 2, [(0, 0), (0, 0)]).is_err());
        assert!(BipartiteGraph::new(2, 2, [(2, 0)]).is_err());
    }
}
