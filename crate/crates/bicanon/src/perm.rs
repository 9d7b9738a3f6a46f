//! Permutations of index sets and their action on matrices.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, Code};

/// A bijection of `{0, .., k-1}` onto itself.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    /// Validates that `images` is a bijection of `{0, .., k-1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in &images {
            if v >= k || seen[v] {
                return Err(Error::Domain(format!(
                    "images {images:?} are not a permutation of 0..{k}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition of `a` and `b` in a permutation of size `k`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        if a >= k || b >= k || a == b {
            return Err(Error::Domain(format!(
                "invalid transposition ({a},{b}) for size {k}"
            )));
        }
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// `self.then(next)` maps `i` to `next(self(i))`.
    pub fn then(&self, next: &Permutation) -> Result<Self> {
        if self.len() != next.len() {
            return Err(Error::Domain(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                next.len()
            )));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&i| next.images[i]).collect(),
        })
    }

    /// All k! permutations of size `k`, in lexicographic order of images.
    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        (0..k).permutations(k).map(|images| Permutation { images })
    }
}

/// Moves the bit of each source column `j` to column `sigma(j)`.
pub(crate) fn permute_row_bits(code: Code, m: usize, sigma: &Permutation) -> Code {
    let mut out = 0;
    for j in 0..m {
        if (code >> (m - 1 - j)) & 1 == 1 {
            out |= 1 << (m - 1 - sigma.apply(j));
        }
    }
    out
}

/// Applies a row and a column permutation: row `row_perm(i)` of the result
/// is row `i` of `a` with its columns sent through `col_perm`.
pub fn apply_perms(
    a: &BinaryMatrix,
    row_perm: &Permutation,
    col_perm: &Permutation,
) -> Result<BinaryMatrix> {
    if row_perm.len() != a.nrows() || col_perm.len() != a.ncols() {
        return Err(Error::Domain(format!(
            "permutation sizes ({}, {}) do not match matrix {}x{}",
            row_perm.len(),
            col_perm.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    let m = a.ncols();
    let mut rows = vec![0; a.nrows()];
    for i in 0..a.nrows() {
        rows[row_perm.apply(i)] = permute_row_bits(a.row(i), m, col_perm);
    }
    BinaryMatrix::from_rows(m, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    #[test]
    fn identity_fixes_matrix() {
        let a = matrix![[0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 0, 0], [1, 0, 0, 0]];
        let id4 = Permutation::identity(4);
        assert_eq!(apply_perms(&a, &id4, &id4).unwrap(), a);
    }

    #[test]
    fn row_transposition_swaps_rows() {
        let a = matrix![[1, 0], [0, 1]];
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        let id = Permutation::identity(2);
        assert_eq!(apply_perms(&a, &swap, &id).unwrap(), matrix![[0, 1], [1, 0]]);
    }

    #[test]
    fn witness_pair_maps_between_equivalent_matrices() {
        // The two equivalent semi-canonical 4x4 matrices from the worked
        // example; some (rho, sigma) must carry one onto the other.
        let a = matrix![[0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 0, 0], [1, 0, 0, 0]];
        let b = matrix![[0, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 0]];
        let found = Permutation::all(4).any(|rho| {
            Permutation::all(4).any(|sigma| apply_perms(&a, &rho, &sigma).unwrap() == b)
        });
        assert!(found, "expected a witnessing permutation pair");
    }

    #[test]
    fn composition_law() {
        let a = matrix![[1, 1, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1]];
        for p_rows in Permutation::all(4).take(8) {
            for q_rows in Permutation::all(4).skip(5).take(8) {
                for p_cols in Permutation::all(3) {
                    for q_cols in Permutation::all(3) {
                        let step = apply_perms(&a, &p_rows, &p_cols).unwrap();
                        let two = apply_perms(&step, &q_rows, &q_cols).unwrap();
                        let combined = apply_perms(
                            &a,
                            &p_rows.then(&q_rows).unwrap(),
                            &p_cols.then(&q_cols).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(two, combined);
                    }
                }
            }
        }
    }

    #[test]
    fn preserves_ones_and_row_count_multiset() {
        let a = matrix![[1, 1, 0, 0], [1, 1, 1, 0], [0, 0, 0, 1]];
        for rho in Permutation::all(3) {
            for sigma in Permutation::all(4) {
                let b = apply_perms(&a, &rho, &sigma).unwrap();
                assert_eq!(b.ones(), a.ones());
                let mut ea: Vec<u32> = a.row_slice().iter().map(|x| x.count_ones()).collect();
                let mut eb: Vec<u32> = b.row_slice().iter().map(|x| x.count_ones()).collect();
                ea.sort_unstable();
                eb.sort_unstable();
                assert_eq!(ea, eb);
            }
        }
    }

    #[test]
    fn size_mismatch_rejected() {
        let a = matrix![[1, 0], [0, 1]];
        let p3 = Permutation::identity(3);
        let p2 = Permutation::identity(2);
        assert!(apply_perms(&a, &p3, &p2).is_err());
        assert!(apply_perms(&a, &p2, &p3).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        for p in Permutation::all(4) {
            let inv = p.inverse();
            assert_eq!(p.then(&inv).unwrap(), Permutation::identity(4));
            assert_eq!(inv.then(&p).unwrap(), Permutation::identity(4));
        }
    }

    #[test]
    fn bad_images_rejected() {
        assert!(Permutation::from_images(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_images(vec![2, 0, 1]).is_ok());
    }
}
