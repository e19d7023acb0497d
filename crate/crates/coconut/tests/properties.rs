//! Randomized and exhaustive invariant checks across the modules.

use proptest::prelude::*;

use coconut::chains::chain_length_u64;
use coconut::counting::ballot;
use coconut::enumerate::enumerate_ct;
use coconut::structures::{validate, ArithStructure};
use coconut::transforms::{
    sequence_from_lattice_path, smooth_at, subdivide, LatticePath, VertexRef,
};

proptest! {
    #[test]
    fn chain_length_shift_identities(x in 1..400u64, y in 1..400u64, k in 0..8u64) {
        let f = chain_length_u64(x, y);
        prop_assert_eq!(chain_length_u64(x + k * y, y), f);
        prop_assert_eq!(chain_length_u64(x, k * x + y), f + k as usize);
    }

    #[test]
    fn subdivide_then_smooth_is_identity(index in 0..1000usize, raw_pos in 0..16usize) {
        let pool = structure_pool();
        let x = &pool[index % pool.len()];
        let p = x.shape().unwrap().p;
        let i = 1 + raw_pos % p;
        let y = subdivide(x, i).unwrap();
        let back = smooth_at(&y, VertexRef::Path(i)).unwrap();
        prop_assert_eq!(&back, x);
    }

    #[test]
    fn r_determines_d_round_trip(index in 0..1000usize) {
        let pool = structure_pool();
        let x = &pool[index % pool.len()];
        let rebuilt = ArithStructure::from_d(
            x.graph().clone(),
            x.shape(),
            x.d().to_vec(),
        ).unwrap();
        prop_assert_eq!(rebuilt.r(), x.r());
        prop_assert!(validate(&rebuilt).valid);
    }
}

fn structure_pool() -> &'static [ArithStructure] {
    static POOL: std::sync::OnceLock<Vec<ArithStructure>> = std::sync::OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = Vec::new();
        for (p, s) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            pool.extend(enumerate_ct(p, s, 20).structures);
        }
        pool
    })
}

/// Every valid lattice path to `(n, k)` maps to a distinct valid ascending
/// subdivision sequence, and the count matches the ballot number.
#[test]
fn lattice_path_bijection_exhaustive() {
    for n in 0..=6usize {
        for k in 0..=n {
            let mut sequences = Vec::new();
            let mut xs = vec![0usize; k];
            generate_paths(n, k, 0, &mut xs, &mut sequences);
            sequences.sort();
            let expected = ballot(n as u64, k as u64).unwrap();
            assert_eq!(
                num_bigint::BigUint::from(sequences.len()),
                expected,
                "path count at (n,k) = ({n},{k})"
            );
            // Distinct paths give distinct sequences.
            assert!(sequences.windows(2).all(|w| w[0] != w[1]));
            // Each image is ascending with 1 <= b_j <= n + j - 1 (1-based j).
            for b in &sequences {
                assert!(b.windows(2).all(|w| w[0] <= w[1]));
                for (j, &pos) in b.iter().enumerate() {
                    assert!(pos >= 1 && pos <= n + j);
                }
            }
        }
    }
}

/// Enumerates north-step x-coordinate multisets `x_1 <= ... <= x_k` with the
/// j-th smallest at least j, mapping each through the bijection.
fn generate_paths(
    n: usize,
    k: usize,
    depth: usize,
    xs: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == k {
        let path = LatticePath::new(n, k, xs.clone()).unwrap();
        out.push(sequence_from_lattice_path(&path).b);
        return;
    }
    let lower = if depth == 0 { 1 } else { xs[depth - 1] }.max(depth + 1);
    for x in lower..=n {
        xs[depth] = x;
        generate_paths(n, k, depth + 1, xs, out);
    }
}

/// Structures found by enumeration satisfy the divisibility law at every
/// vertex and have coprime r-entries.
#[test]
fn enumerated_structures_validate() {
    for (p, s) in [(2, 2), (1, 4), (3, 2)] {
        let result = enumerate_ct(p, s, 15);
        assert!(result.count() > 0);
        for x in &result.structures {
            let report = validate(x);
            assert!(report.valid, "invalid structure {:?}", x.r());
        }
    }
}
