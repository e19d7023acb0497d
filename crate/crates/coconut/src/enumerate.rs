//! Independent brute-force oracles: bounded enumeration of all arithmetical
//! structures on a small graph, and complete-within-bound enumeration of
//! smooth structures on `CT(p,s)` via leaf assignments.
//!
//! A bounded search can miss structures with large entries, so every result
//! carries its bound and a stability flag (count unchanged when the bound is
//! doubled).

use num_integer::Integer;

use crate::chains::{chain_length_u64, construct_smooth, LeafAssignment};
use crate::counting::{OracleEntry, SmoothCountOracle};
use crate::graph::{build_coconut_tree, CoconutShape, Graph};
use crate::structures::{int_vec, ArithStructure};

/// Result of a bounded enumeration: canonically sorted (lexicographic by r),
/// pairwise distinct, each structure valid.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub descriptor: String,
    pub bound: u64,
    pub structures: Vec<ArithStructure>,
    pub stable: bool,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.structures.len()
    }
}

fn divisors_up_to(n: u64, cap: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            if d <= cap {
                small.push(d);
            }
            let q = n / d;
            if q != d && q <= cap {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small.sort_unstable();
    small
}

/// Depth-first search over r-assignments in vertex-index order. A vertex is
/// checked for divisibility as soon as its last neighbor is assigned; a
/// vertex whose neighbors are all assigned before it is only offered the
/// divisors of its neighbor sum.
fn search_r_vectors(graph: &Graph, max_r: u64, collect: bool) -> (u64, Vec<Vec<u64>>) {
    let n = graph.vertex_count();
    if n == 1 {
        // No positive d satisfies d * r = 0 on the one-vertex graph.
        return (0, Vec::new());
    }
    let max_nb: Vec<usize> = (0..n)
        .map(|v| *graph.neighbors(v).iter().max().unwrap())
        .collect();
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        check_at[max_nb[v].max(v)].push(v);
    }
    let mut r = vec![0u64; n];
    let mut count = 0u64;
    let mut found: Vec<Vec<u64>> = Vec::new();

    fn neighbor_sum(graph: &Graph, r: &[u64], v: usize) -> u64 {
        graph.neighbors(v).iter().map(|&u| r[u]).sum()
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        graph: &Graph,
        max_r: u64,
        collect: bool,
        depth: usize,
        max_nb: &[usize],
        check_at: &[Vec<usize>],
        r: &mut Vec<u64>,
        count: &mut u64,
        found: &mut Vec<Vec<u64>>,
    ) {
        let n = graph.vertex_count();
        let candidates: Vec<u64> = if max_nb[depth] < depth {
            divisors_up_to(neighbor_sum(graph, r, depth), max_r)
        } else {
            (1..=max_r).collect()
        };
        'values: for value in candidates {
            r[depth] = value;
            for &u in &check_at[depth] {
                if !neighbor_sum(graph, r, u).is_multiple_of(r[u]) {
                    continue 'values;
                }
            }
            if depth + 1 == n {
                let g = r.iter().fold(0u64, |acc, &x| acc.gcd(&x));
                if g == 1 {
                    *count += 1;
                    if collect {
                        found.push(r.clone());
                    }
                }
            } else {
                descend(
                    graph, max_r, collect, depth + 1, max_nb, check_at, r, count, found,
                );
            }
        }
        r[depth] = 0;
    }

    descend(
        graph,
        max_r,
        collect,
        0,
        &max_nb,
        &check_at,
        &mut r,
        &mut count,
        &mut found,
    );
    found.sort_unstable();
    (count, found)
}

/// All arithmetical structures on `graph` whose r-entries are at most
/// `max_r`, with the stability flag from re-counting at the doubled bound.
pub fn enumerate_all(
    graph: &Graph,
    shape: Option<CoconutShape>,
    max_r: u64,
    descriptor: impl Into<String>,
) -> EnumerationResult {
    let (_, vectors) = search_r_vectors(graph, max_r, true);
    let (doubled, _) = search_r_vectors(graph, max_r * 2, false);
    let structures: Vec<ArithStructure> = vectors
        .into_iter()
        .map(|r| {
            ArithStructure::from_r(graph.clone(), shape, int_vec(&r))
                .expect("search only yields valid structures")
        })
        .collect();
    let stable = structures.len() as u64 == doubled;
    EnumerationResult {
        descriptor: descriptor.into(),
        bound: max_r,
        structures,
        stable,
    }
}

/// True iff the structure count on `graph` is unchanged when the bound is
/// doubled.
pub fn stability_check_graph(graph: &Graph, bound: u64) -> bool {
    search_r_vectors(graph, bound, false).0 == search_r_vectors(graph, 2 * bound, false).0
}

/// Visits every leaf assignment with center `c <= max_c` whose constructed
/// smooth structure has path length `p`, calling `emit` per hit. Ordered
/// tuples of proper divisors of `c` with gcd 1 are the hypothesis space.
fn scan_smooth(p: usize, s: usize, max_c: u64, mut emit: impl FnMut(u64, &[u64])) {
    for c in 2..=max_c {
        let divisors = divisors_up_to(c, c - 1);
        if divisors.is_empty() {
            continue;
        }
        let mut tuple = vec![0usize; s];
        loop {
            let values: Vec<u64> = tuple.iter().map(|&i| divisors[i]).collect();
            let g = values.iter().fold(0u64, |acc, &x| acc.gcd(&x));
            if g == 1 {
                let sum: u64 = values.iter().sum();
                if chain_length_u64(sum, c) == p + 1 {
                    emit(c, &values);
                }
            }
            // Odometer increment over divisor indices.
            let mut pos = s;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < divisors.len() {
                    break;
                }
                tuple[pos] = 0;
            }
            if tuple.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
}

/// Smooth structures on `CT(p,s)` with center `r_p <= max_c`, built through
/// the leaf-assignment construction.
pub fn enumerate_smooth_ct(p: usize, s: usize, max_c: u64) -> EnumerationResult {
    assert!(p >= 1 && s >= 2 && max_c >= 2);
    let mut structures = Vec::new();
    scan_smooth(p, s, max_c, |c, values| {
        let assignment = LeafAssignment::new(c.into(), int_vec(values))
            .expect("scan only yields valid assignments");
        let structure = construct_smooth(&assignment).expect("assignment checked");
        debug_assert_eq!(structure.shape().unwrap().p, p);
        structures.push(structure);
    });
    let mut doubled = 0u64;
    scan_smooth(p, s, max_c * 2, |_, _| doubled += 1);
    structures.sort_by(|a, b| a.r().cmp(b.r()));
    debug_assert!(structures.windows(2).all(|w| w[0].r() != w[1].r()));
    let stable = structures.len() as u64 == doubled;
    EnumerationResult {
        descriptor: format!("smooth ct:{p},{s}"),
        bound: max_c,
        structures,
        stable,
    }
}

/// True iff the smooth-structure count for `CT(p,s)` is unchanged when the
/// center bound is doubled.
pub fn stability_check_smooth(p: usize, s: usize, bound: u64) -> bool {
    let mut at_bound = 0u64;
    scan_smooth(p, s, bound, |_, _| at_bound += 1);
    let mut at_double = 0u64;
    scan_smooth(p, s, 2 * bound, |_, _| at_double += 1);
    at_bound == at_double
}

/// Fills an oracle with freshly enumerated smooth counts for all
/// `1 <= p <= p_max`, `2 <= s <= s_max`.
pub fn build_oracle(p_max: usize, s_max: usize, max_c: u64) -> SmoothCountOracle {
    let mut oracle = SmoothCountOracle::new();
    for p in 1..=p_max {
        for s in 2..=s_max {
            let mut at_bound = 0u64;
            scan_smooth(p, s, max_c, |_, _| at_bound += 1);
            let mut at_double = 0u64;
            scan_smooth(p, s, 2 * max_c, |_, _| at_double += 1);
            oracle.insert(OracleEntry {
                p,
                s,
                max_c,
                smooth_count: at_bound,
                stable: at_bound == at_double,
            });
        }
    }
    oracle
}

/// Builds `CT(p,s)` and enumerates all structures on it.
pub fn enumerate_ct(p: usize, s: usize, max_r: u64) -> EnumerationResult {
    let (graph, shape) = build_coconut_tree(p, s).expect("positive p and s");
    enumerate_all(&graph, Some(shape), max_r, format!("ct:{p},{s}"))
}
