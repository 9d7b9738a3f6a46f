//! Ground-truth brute force over whole permutation orbits.
//!
//! Everything here is definitional: the canonical representative of a class
//! is the orbit member with lexicographically minimal row code, found by
//! exhausting permutations. The theorem-driven fast path in
//! [`crate::canonical`] is validated against this module, never the other
//! way around.

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, Code};
use crate::perm::{apply_perms, permute_row_bits, Permutation};

/// Structural bounds for the brute-force routines. Deliberately wall-clock
/// free so that test outcomes are deterministic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest row count an orbit scan will accept.
    pub max_rows: usize,
    /// Largest column count an orbit scan will accept.
    pub max_cols: usize,
    /// Largest n*m for which [`count_classes`] will scan all 2^(n*m) matrices.
    pub max_cells: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rows: 7, max_cols: 7, max_cells: 20 }
    }
}

impl Budget {
    fn check_orbit(&self, a: &BinaryMatrix) -> Result<()> {
        if a.nrows() > self.max_rows || a.ncols() > self.max_cols {
            return Err(Error::Resource(format!(
                "oracle budget exceeded: {}x{} matrix, budget allows at most \
                 {} rows and {} columns",
                a.nrows(),
                a.ncols(),
                self.max_rows,
                self.max_cols
            )));
        }
        Ok(())
    }

    fn check_scan(&self, n: usize, m: usize) -> Result<()> {
        if n > self.max_rows || m > self.max_cols || n * m > self.max_cells {
            return Err(Error::Resource(format!(
                "oracle budget exceeded: scanning all {n}x{m} matrices, budget \
                 allows at most {} rows, {} columns and {} cells",
                self.max_rows, self.max_cols, self.max_cells
            )));
        }
        Ok(())
    }
}

/// Column permutations of width m, materialized once per scan.
pub(crate) fn col_perms(m: usize) -> Vec<Permutation> {
    Permutation::all(m).collect()
}

/// Minimal row-code tuple over the whole orbit of `a`, given the
/// precomputed column permutations. For a fixed column permutation the best
/// row arrangement of the resulting codes is simply their sorted order.
pub(crate) fn min_orbit_rows(a: &BinaryMatrix, sigmas: &[Permutation]) -> Vec<Code> {
    let m = a.ncols();
    let mut best: Option<Vec<Code>> = None;
    let mut candidate = vec![0; a.nrows()];
    for sigma in sigmas {
        for (slot, &row) in candidate.iter_mut().zip(a.row_slice()) {
            *slot = permute_row_bits(row, m, sigma);
        }
        candidate.sort_unstable();
        match &best {
            Some(b) if *b <= candidate => {}
            _ => best = Some(candidate.clone()),
        }
    }
    best.unwrap_or_default()
}

/// The orbit member of `a` with lexicographically minimal row code.
pub fn brute_force_canonical(a: &BinaryMatrix, budget: &Budget) -> Result<BinaryMatrix> {
    budget.check_orbit(a)?;
    if a.is_empty() {
        return Ok(a.clone());
    }
    let rows = min_orbit_rows(a, &col_perms(a.ncols()));
    BinaryMatrix::from_rows(a.ncols(), rows)
}

/// Trust anchor: the same minimum found by the plain double loop over all
/// n!·m! permutation pairs. Slower than [`brute_force_canonical`]; kept so
/// the two routes can be checked against each other.
pub fn brute_force_canonical_plain(a: &BinaryMatrix, budget: &Budget) -> Result<BinaryMatrix> {
    budget.check_orbit(a)?;
    let mut best: Option<BinaryMatrix> = None;
    for rho in Permutation::all(a.nrows()) {
        for sigma in Permutation::all(a.ncols()) {
            let b = apply_perms(a, &rho, &sigma)?;
            match &best {
                Some(cur) if cur.row_code() <= b.row_code() => {}
                _ => best = Some(b),
            }
        }
    }
    Ok(best.unwrap_or_else(|| a.clone()))
}

/// Whether `a` and `b` lie in the same orbit. Different shapes compare
/// unequal rather than erroring.
pub fn equivalent(a: &BinaryMatrix, b: &BinaryMatrix, budget: &Budget) -> Result<bool> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Ok(false);
    }
    Ok(brute_force_canonical(a, budget)? == brute_force_canonical(b, budget)?)
}

/// Number of distinct orbits among all 2^(n*m) matrices, i.e. the number of
/// part-preserving isomorphism classes of bipartite graphs on parts of
/// sizes n and m.
pub fn count_classes(n: usize, m: usize, budget: &Budget) -> Result<u64> {
    budget.check_scan(n, m)?;
    if n == 0 || m == 0 {
        return Ok(1);
    }
    let sigmas = col_perms(m);
    let mut count = 0;
    for a in BinaryMatrix::all(n, m)? {
        if min_orbit_rows(&a, &sigmas) == a.row_slice() {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    fn example_a() -> BinaryMatrix {
        matrix![[0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 0, 0], [1, 0, 0, 0]]
    }

    fn example_b() -> BinaryMatrix {
        matrix![[0, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 0]]
    }

    fn example_c() -> BinaryMatrix {
        matrix![[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, 1, 0, 0]]
    }

    #[test]
    fn canonical_form_of_worked_example() {
        let budget = Budget::default();
        let c = brute_force_canonical(&example_a(), &budget).unwrap();
        assert_eq!(c, example_c());
        assert_eq!(c.row_code().values(), &[1, 2, 12, 12]);
        assert_eq!(c.col_code().values(), &[3, 3, 4, 8]);
        // Idempotent.
        assert_eq!(brute_force_canonical(&c, &budget).unwrap(), c);
    }

    #[test]
    fn zero_matrix_is_its_own_orbit() {
        let budget = Budget::default();
        let z = BinaryMatrix::zero(3, 3).unwrap();
        assert_eq!(brute_force_canonical(&z, &budget).unwrap(), z);
    }

    #[test]
    fn pruned_route_matches_plain_double_loop() {
        let budget = Budget::default();
        for a in BinaryMatrix::all(3, 3).unwrap() {
            let fast = brute_force_canonical(&a, &budget).unwrap();
            let plain = brute_force_canonical_plain(&a, &budget).unwrap();
            assert_eq!(fast, plain, "routes disagree on {a:?}");
        }
    }

    #[test]
    fn pruned_route_matches_definitional_min_3x3() {
        // The definition itself: minimum of apply_perms over all 36 pairs.
        let budget = Budget::default();
        for a in BinaryMatrix::all(3, 3).unwrap().step_by(7) {
            let by_def = Permutation::all(3)
                .flat_map(|rho| {
                    Permutation::all(3).map(move |sigma| (rho.clone(), sigma))
                })
                .map(|(rho, sigma)| apply_perms(&a, &rho, &sigma).unwrap())
                .min_by(|x, y| x.row_code().cmp(&y.row_code()))
                .unwrap();
            assert_eq!(brute_force_canonical(&a, &budget).unwrap(), by_def);
        }
    }

    #[test]
    fn equivalence_verdicts() {
        let budget = Budget::default();
        assert!(equivalent(&example_a(), &example_b(), &budget).unwrap());
        assert!(equivalent(&example_a(), &example_a(), &budget).unwrap());
        let id = matrix![[1, 0], [0, 1]];
        let ones = matrix![[1, 1], [1, 1]];
        assert!(!equivalent(&id, &ones, &budget).unwrap());
        // Shape mismatch is a verdict, not an error.
        let wide = BinaryMatrix::zero(2, 3).unwrap();
        assert!(!equivalent(&id, &wide, &budget).unwrap());
    }

    #[test]
    fn class_counts_at_small_sizes() {
        let budget = Budget::default();
        assert_eq!(count_classes(1, 1, &budget).unwrap(), 2);
        assert_eq!(count_classes(1, 3, &budget).unwrap(), 4);
        assert_eq!(count_classes(2, 2, &budget).unwrap(), 7);
    }

    #[test]
    fn distinct_canonical_forms_match_class_count() {
        let budget = Budget::default();
        for (n, m) in [(2, 2), (2, 3), (3, 2)] {
            let mut forms = std::collections::HashSet::new();
            for a in BinaryMatrix::all(n, m).unwrap() {
                forms.insert(brute_force_canonical(&a, &budget).unwrap().row_code());
            }
            assert_eq!(forms.len() as u64, count_classes(n, m, &budget).unwrap());
        }
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let budget = Budget::default();
        for a in BinaryMatrix::all(2, 3).unwrap() {
            let canon = brute_force_canonical(&a, &budget).unwrap();
            for rho in Permutation::all(2) {
                for sigma in Permutation::all(3) {
                    let b = apply_perms(&a, &rho, &sigma).unwrap();
                    assert_eq!(brute_force_canonical(&b, &budget).unwrap(), canon);
                }
            }
        }
    }

    #[test]
    fn budget_violations_are_resource_errors() {
        let budget = Budget::default();
        let big = BinaryMatrix::zero(8, 3).unwrap();
        assert!(matches!(
            brute_force_canonical(&big, &budget),
            Err(Error::Resource(_))
        ));
        assert!(matches!(count_classes(5, 5, &budget), Err(Error::Resource(_))));
    }
}
