//! Canonical binary matrices under independent row and column permutations,
//! and bipartite graph isomorphism through them.
//!
//! Two n×m matrices over {0,1} are equivalent when one becomes the other
//! under some permutation of rows and some permutation of columns. Each
//! equivalence class contains exactly one member whose tuple of row codes
//! (each row read as a binary numeral, leftmost column most significant) is
//! lexicographically minimal; that member is the canonical matrix of the
//! class. Canonical matrices are in bijection with bipartite graphs up to
//! part-preserving isomorphism, which is what makes them worth enumerating.
//!
//! The crate provides:
//!
//! - [`matrix`]: word-packed matrices, row/column codes, text I/O;
//! - [`perm`]: permutations and their action on matrices;
//! - [`stats`]: per-row statistics used by the canonicity conditions;
//! - [`oracle`]: definitional brute force over whole orbits (ground truth);
//! - [`canonical`]: the fast recursive 7-condition canonicity test and a
//!   branch-and-bound canonicalizer, both validated against the oracle;
//! - [`enumerate`]: pruned generation and counting of semi-canonical and
//!   canonical matrices;
//! - [`graph`]: bipartite graphs, their matrix encoding, and isomorphism
//!   testing via canonical forms.

pub mod canonical;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod stats;

pub use canonical::{
    block_decompose, canonicalize, canonicalize_with, condition6_competitor,
    first_row_structure_holds, is_canonical, is_semi_canonical, oracle_agreement_sweep,
    BlockDecomposition, CanonicityReport, SweepOutcome, Witness, DEFAULT_NODE_LIMIT,
};
pub use enumerate::{
    count_canonical, count_semi_canonical, enumerate_canonical, enumerate_semi_canonical,
    CountTable, MatrixStream,
};
pub use error::{Error, Result};
pub use graph::{canonical_key, isomorphic, isomorphic_either, BipartiteGraph, Orientation};
pub use matrix::{decode_row_code, BinaryMatrix, Code, ColCode, RowCode, MAX_DIM};
pub use oracle::{
    brute_force_canonical, brute_force_canonical_plain, count_classes, equivalent, Budget,
};
pub use perm::{apply_perms, Permutation};
pub use stats::{row_stats, RowStats, Run};
