//! Extended validation: exhaustive oracle-agreement sweeps past the sizes
//! the test suite pins, plus randomized spot checks at larger shapes.

use bicanon::*;

fn main() {
    let budget = Budget { max_rows: 7, max_cols: 7, max_cells: 25 };
    for (n, m) in [
        (1, 1), (1, 4), (4, 1), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2),
        (3, 4), (4, 3), (4, 4), (2, 5), (5, 2), (3, 5), (5, 3), (2, 6), (6, 2),
        (5, 4), (4, 5), (2, 7), (7, 2), (3, 6), (6, 3), (7, 3),
    ] {
        let out = oracle_agreement_sweep(n, m, &budget).unwrap();
        println!(
            "{n}x{m}: {} over {} matrices{}",
            if out.passed() { "OK" } else { "MISMATCH" },
            out.checked,
            out.first_mismatch
                .as_ref()
                .map(|a| format!(" first bad r={}", a.row_code()))
                .unwrap_or_default()
        );
        assert!(out.passed());
    }

    // Randomized larger shapes: canonicalize must agree with the oracle.
    let mut state: u64 = 0x9E3779B97F4A7C15;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for (n, m, reps) in [(5, 5, 10000), (6, 6, 5000), (6, 4, 5000), (7, 5, 2000), (7, 7, 1000)] {
        for _ in 0..reps {
            let rows: Vec<Code> = (0..n).map(|_| next() & ((1u64 << m) - 1)).collect();
            let a = BinaryMatrix::from_rows(m, rows).unwrap();
            let fast = canonicalize(&a).unwrap();
            let truth = brute_force_canonical(&a, &budget).unwrap();
            assert_eq!(fast, truth, "canonicalize mismatch on {a:?}");
            assert!(is_canonical(&fast).is_canonical, "result not canonical: {a:?}");
            assert!(!is_canonical(&a).is_canonical || a == truth, "verdict mismatch on {a:?}");
        }
        println!("{n}x{m}: OK over {reps} random matrices");
    }
    println!("all extended checks passed");
}
