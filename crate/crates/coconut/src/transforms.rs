//! Smoothing, subdivision, subdivision sequences, the lattice-path
//! correspondence, descendant generation, and leaf expansion.

use thiserror::Error;

use crate::graph::{build_coconut_tree, build_path, GraphError};
use crate::structures::{ArithStructure, Int, StructureError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("d is not 1 at {0}; vertex cannot be smoothed")]
    NotSmoothable(VertexRef),
    #[error("vertex {0} is out of range or not smoothable by position")]
    Position(VertexRef),
    #[error("leaf slot {0} is duplicated or out of range")]
    LeafSlot(usize),
    #[error("subdivision position {position} invalid at step {index}: must be in 1..={max}")]
    InvalidSequence {
        index: usize,
        position: usize,
        max: usize,
    },
    #[error("leaf {0} has d = 1; smooth it explicitly before taking the ancestor")]
    LeafSmoothable(usize),
    #[error("operation requires a coconut tree shape")]
    Shape,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A vertex of `CT(p,s)` named by position: path vertex `v_i` or leaf
/// `l_j`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRef {
    Path(usize),
    Leaf(usize),
}

impl std::fmt::Display for VertexRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexRef::Path(i) => write!(f, "v{i}"),
            VertexRef::Leaf(j) => write!(f, "l{j}"),
        }
    }
}

/// A vector of subdivision positions applied left to right to a structure
/// whose path length is `base_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionSequence {
    pub b: Vec<usize>,
    pub base_p: usize,
}

impl SubdivisionSequence {
    pub fn new(b: Vec<usize>, base_p: usize) -> Self {
        SubdivisionSequence { b, base_p }
    }

    /// Valid iff `1 <= b_i <= base_p + i - 1` for every i (1-based).
    pub fn check(&self) -> Result<(), TransformError> {
        for (idx, &pos) in self.b.iter().enumerate() {
            let max = self.base_p + idx;
            if pos == 0 || pos > max {
                return Err(TransformError::InvalidSequence {
                    index: idx + 1,
                    position: pos,
                    max,
                });
            }
        }
        Ok(())
    }
}

/// A lattice path from `(0,0)` to `(n,k)` that never crosses above `y = x`,
/// recorded as the multiset of x-coordinates of its north steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    pub n: usize,
    pub k: usize,
    pub north_step_xs: Vec<usize>,
}

impl LatticePath {
    pub fn new(n: usize, k: usize, north_step_xs: Vec<usize>) -> Result<Self, TransformError> {
        let path = LatticePath {
            n,
            k,
            north_step_xs,
        };
        if path.k > path.n || path.north_step_xs.len() != path.k {
            return Err(TransformError::InvalidSequence {
                index: 0,
                position: path.k,
                max: path.n,
            });
        }
        let mut sorted = path.north_step_xs.clone();
        sorted.sort_unstable();
        for (j, &x) in sorted.iter().enumerate() {
            // j-th smallest north-step x must be >= j (1-based), else the
            // path crosses above y = x; x can be at most n.
            if x < j + 1 || x > path.n {
                return Err(TransformError::InvalidSequence {
                    index: j + 1,
                    position: x,
                    max: path.n,
                });
            }
        }
        Ok(path)
    }
}

/// Maps a lattice path to its subdivision sequence: subtract each north-step
/// x-coordinate from `n + 1` and sort ascending.
pub fn sequence_from_lattice_path(path: &LatticePath) -> SubdivisionSequence {
    let mut b: Vec<usize> = path.north_step_xs.iter().map(|&x| path.n + 1 - x).collect();
    b.sort_unstable();
    SubdivisionSequence::new(b, path.n)
}

fn shape_of(structure: &ArithStructure) -> Result<crate::graph::CoconutShape, TransformError> {
    structure.shape().ok_or(TransformError::Shape)
}

/// Smooths at a vertex with `d = 1`: removes a path vertex `v_i`
/// (`1 <= i <= p-1`, yielding `CT(p-1,s)`) or a leaf `l_j` (yielding
/// `CT(p,s-1)`, or the path `P_p` when the last leaf is removed).
pub fn smooth_at(structure: &ArithStructure, vertex: VertexRef) -> Result<ArithStructure, TransformError> {
    let shape = shape_of(structure)?;
    let (p, s) = (shape.p, shape.s);
    let r = structure.r();
    match vertex {
        VertexRef::Path(i) => {
            if i == 0 || i >= p {
                return Err(TransformError::Position(vertex));
            }
            if !num_traits::One::is_one(structure.d_at_path(i)) {
                return Err(TransformError::NotSmoothable(vertex));
            }
            let mut new_r: Vec<Int> = Vec::with_capacity(p + s - 1);
            for k in 1..=p {
                if k != i {
                    new_r.push(r[shape.path_index(k)].clone());
                }
            }
            for j in 1..=s {
                new_r.push(r[shape.leaf_index(j)].clone());
            }
            let (graph, new_shape) = build_coconut_tree(p - 1, s)?;
            Ok(ArithStructure::from_r(graph, Some(new_shape), new_r)?)
        }
        VertexRef::Leaf(j) => {
            if j == 0 || j > s {
                return Err(TransformError::Position(vertex));
            }
            if !num_traits::One::is_one(structure.d_at_leaf(j)) {
                return Err(TransformError::NotSmoothable(vertex));
            }
            let mut new_r: Vec<Int> = Vec::with_capacity(p + s - 1);
            for k in 1..=p {
                new_r.push(r[shape.path_index(k)].clone());
            }
            for l in 1..=s {
                if l != j {
                    new_r.push(r[shape.leaf_index(l)].clone());
                }
            }
            if s == 1 {
                // Removing the last leaf degenerates CT(p,1) to the path P_p.
                let graph = build_path(p)?;
                Ok(ArithStructure::from_r(graph, None, new_r)?)
            } else {
                let (graph, new_shape) = build_coconut_tree(p, s - 1)?;
                Ok(ArithStructure::from_r(graph, Some(new_shape), new_r)?)
            }
        }
    }
}

fn smoothable_path_vertices(structure: &ArithStructure) -> Vec<usize> {
    let shape = structure.shape().expect("shape checked by caller");
    (1..shape.p)
        .filter(|&i| num_traits::One::is_one(structure.d_at_path(i)))
        .collect()
}

/// Repeatedly smooths path vertices with `d = 1` until none remain, choosing
/// each vertex via `chooser` from the current candidate list. The result is
/// independent of the choices made.
pub fn smooth_ancestor_by(
    structure: &ArithStructure,
    mut chooser: impl FnMut(&[usize]) -> usize,
) -> Result<ArithStructure, TransformError> {
    let shape = shape_of(structure)?;
    for j in 1..=shape.s {
        if num_traits::One::is_one(structure.d_at_leaf(j)) {
            return Err(TransformError::LeafSmoothable(j));
        }
    }
    let mut current = structure.clone();
    loop {
        let candidates = smoothable_path_vertices(&current);
        if candidates.is_empty() {
            debug_assert!(current.is_smooth().unwrap());
            return Ok(current);
        }
        let pick = candidates[chooser(&candidates).min(candidates.len() - 1)];
        current = smooth_at(&current, VertexRef::Path(pick))?;
    }
}

/// The unique smooth ancestor of a structure whose leaves all have `d >= 2`.
pub fn smooth_ancestor(structure: &ArithStructure) -> Result<ArithStructure, TransformError> {
    smooth_ancestor_by(structure, |_| 0)
}

/// Subdivides at position `1 <= i <= p`: inserts a path vertex carrying
/// `r_{i-1} + r_i` (or duplicating `r_1` when `i = 1`) with `d = 1`.
pub fn subdivide(structure: &ArithStructure, i: usize) -> Result<ArithStructure, TransformError> {
    let shape = shape_of(structure)?;
    let (p, s) = (shape.p, shape.s);
    if i == 0 || i > p {
        return Err(TransformError::Position(VertexRef::Path(i)));
    }
    let r = structure.r();
    let mut new_r: Vec<Int> = Vec::with_capacity(p + s + 1);
    for k in 1..=p {
        if k == i {
            if i == 1 {
                new_r.push(r[shape.path_index(1)].clone());
            } else {
                new_r.push(&r[shape.path_index(i - 1)] + &r[shape.path_index(i)]);
            }
        }
        new_r.push(r[shape.path_index(k)].clone());
    }
    for j in 1..=s {
        new_r.push(r[shape.leaf_index(j)].clone());
    }
    let (graph, new_shape) = build_coconut_tree(p + 1, s)?;
    let result = ArithStructure::from_r(graph, Some(new_shape), new_r)?;
    debug_assert!(num_traits::One::is_one(result.d_at_path(i)));
    Ok(result)
}

/// Folds [`subdivide`] over the sequence left to right.
pub fn apply_subdivision_sequence(
    structure: &ArithStructure,
    seq: &SubdivisionSequence,
) -> Result<ArithStructure, TransformError> {
    let shape = shape_of(structure)?;
    let seq_for_base = SubdivisionSequence::new(seq.b.clone(), shape.p);
    seq_for_base.check()?;
    let mut current = structure.clone();
    for &pos in &seq_for_base.b {
        current = subdivide(&current, pos)?;
    }
    Ok(current)
}

/// All descendants of a smooth seed on `CT(i,s)` at path length `p`,
/// generated through ascending (canonical) subdivision sequences and sorted
/// lexicographically by r. The count equals the ballot number `B(p-1, p-i)`.
pub fn descendants(seed: &ArithStructure, p: usize) -> Result<Vec<ArithStructure>, TransformError> {
    let shape = shape_of(seed)?;
    let i = shape.p;
    if p < i {
        return Err(TransformError::Position(VertexRef::Path(p)));
    }
    let k = p - i;
    let mut out = Vec::new();
    fn extend(
        current: ArithStructure,
        min_pos: usize,
        done: usize,
        k: usize,
        base_p: usize,
        out: &mut Vec<ArithStructure>,
    ) -> Result<(), TransformError> {
        if done == k {
            out.push(current);
            return Ok(());
        }
        for pos in min_pos..=base_p + done {
            let next = subdivide(&current, pos)?;
            extend(next, pos, done + 1, k, base_p, out)?;
        }
        Ok(())
    }
    extend(seed.clone(), 1, 0, k, i, &mut out)?;
    out.sort_by(|a, b| a.r().cmp(b.r()));
    debug_assert!(out.windows(2).all(|w| w[0].r() != w[1].r()));
    Ok(out)
}

/// Cross-check path for [`descendants`]: applies every valid subdivision
/// sequence (not only ascending ones) and deduplicates. Exponential; only
/// for tiny cases.
pub fn descendants_exhaustive(
    seed: &ArithStructure,
    p: usize,
) -> Result<Vec<ArithStructure>, TransformError> {
    let shape = shape_of(seed)?;
    let i = shape.p;
    if p < i {
        return Err(TransformError::Position(VertexRef::Path(p)));
    }
    let k = p - i;
    let mut out = Vec::new();
    fn extend(
        current: ArithStructure,
        done: usize,
        k: usize,
        base_p: usize,
        out: &mut Vec<ArithStructure>,
    ) -> Result<(), TransformError> {
        if done == k {
            out.push(current);
            return Ok(());
        }
        for pos in 1..=base_p + done {
            let next = subdivide(&current, pos)?;
            extend(next, done + 1, k, base_p, out)?;
        }
        Ok(())
    }
    extend(seed.clone(), 0, k, i, &mut out)?;
    out.sort_by(|a, b| a.r().cmp(b.r()));
    out.dedup_by(|a, b| a.r() == b.r());
    Ok(out)
}

/// Expands a structure on `CT(p, s-j)` (or on the path `P_p` when shapeless)
/// to `CT(p, s)` by placing the label `r_p` on `j` chosen leaf slots and the
/// old leaf labels, in order, on the rest. Requires every old leaf to be
/// non-smoothable (`d >= 2`).
pub fn expand_leaves(
    structure: &ArithStructure,
    positions: &[usize],
    target_s: usize,
) -> Result<ArithStructure, TransformError> {
    let (p, old_s, path_r, old_leaf_r): (usize, usize, Vec<Int>, Vec<Int>) =
        match structure.shape() {
            Some(shape) => {
                for j in 1..=shape.s {
                    if num_traits::One::is_one(structure.d_at_leaf(j)) {
                        return Err(TransformError::LeafSmoothable(j));
                    }
                }
                (
                    shape.p,
                    shape.s,
                    (1..=shape.p)
                        .map(|k| structure.r()[shape.path_index(k)].clone())
                        .collect(),
                    (1..=shape.s)
                        .map(|j| structure.r()[shape.leaf_index(j)].clone())
                        .collect(),
                )
            }
            None => {
                // A shapeless structure must be a path in vertex order.
                let n = structure.graph().vertex_count();
                if structure.graph() != &build_path(n)? {
                    return Err(TransformError::Shape);
                }
                (n, 0, structure.r().to_vec(), Vec::new())
            }
        };
    let j = target_s.checked_sub(old_s).ok_or(TransformError::LeafSlot(target_s))?;
    if positions.len() != j {
        return Err(TransformError::LeafSlot(positions.len()));
    }
    let mut chosen = vec![false; target_s];
    for &slot in positions {
        if slot == 0 || slot > target_s || chosen[slot - 1] {
            return Err(TransformError::LeafSlot(slot));
        }
        chosen[slot - 1] = true;
    }
    let central_r = path_r[p - 1].clone();
    let mut old_labels = old_leaf_r.into_iter();
    let mut new_r = path_r;
    for slot_chosen in chosen {
        if slot_chosen {
            new_r.push(central_r.clone());
        } else {
            new_r.push(old_labels.next().expect("slot arithmetic checked"));
        }
    }
    let (graph, new_shape) = build_coconut_tree(p, target_s)?;
    Ok(ArithStructure::from_r(graph, Some(new_shape), new_r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{int_vec, validate};

    fn ct(p: usize, s: usize, r: &[u64]) -> ArithStructure {
        let (graph, shape) = build_coconut_tree(p, s).unwrap();
        ArithStructure::from_r(graph, Some(shape), int_vec(r)).unwrap()
    }

    #[test]
    fn smoothing_at_v2_on_ct_5_3() {
        let x = ct(5, 3, &[1, 3, 2, 3, 4, 2, 2, 1]);
        let y = smooth_at(&x, VertexRef::Path(2)).unwrap();
        assert_eq!(y.r(), &int_vec(&[1, 2, 3, 4, 2, 2, 1])[..]);
        assert_eq!(y.d(), &int_vec(&[2, 2, 2, 2, 2, 2, 4])[..]);
        assert_eq!(y.shape().unwrap().p, 4);
    }

    #[test]
    fn double_smoothing_on_ct_4_4() {
        let x = ct(4, 4, &[2, 2, 4, 6, 3, 3, 2, 6]);
        assert_eq!(x.d(), &int_vec(&[1, 3, 2, 3, 2, 2, 3, 1])[..]);
        let y = smooth_at(&x, VertexRef::Path(1)).unwrap();
        let z = smooth_at(&y, VertexRef::Leaf(4)).unwrap();
        assert_eq!(z.r(), &int_vec(&[2, 4, 6, 3, 3, 2])[..]);
        assert_eq!(z.d(), &int_vec(&[2, 2, 2, 2, 2, 3])[..]);
        assert!(z.is_smooth().unwrap());
    }

    #[test]
    fn smoothing_rejects_d_not_one_and_central() {
        let x = ct(3, 3, &[2, 4, 6, 3, 3, 2]);
        assert!(matches!(
            smooth_at(&x, VertexRef::Path(1)),
            Err(TransformError::NotSmoothable(_))
        ));
        assert!(matches!(
            smooth_at(&x, VertexRef::Path(3)),
            Err(TransformError::Position(_))
        ));
    }

    #[test]
    fn smooth_ancestor_of_non_smooth_structure() {
        let x = ct(5, 3, &[1, 3, 2, 3, 4, 2, 2, 1]);
        let y = smooth_ancestor(&x).unwrap();
        assert_eq!(y.r(), &int_vec(&[1, 2, 3, 4, 2, 2, 1])[..]);
        // A smooth structure is its own ancestor.
        let z = ct(3, 3, &[2, 4, 6, 3, 3, 2]);
        assert_eq!(smooth_ancestor(&z).unwrap(), z);
    }

    #[test]
    fn smooth_ancestor_rejects_smoothable_leaves() {
        // All-ones on CT(2,2): every leaf has d = 1.
        let x = ct(2, 2, &[1, 1, 1, 1]);
        assert!(matches!(
            smooth_ancestor(&x),
            Err(TransformError::LeafSmoothable(_))
        ));
    }

    #[test]
    fn subdivision_on_ct_3_2() {
        let x = ct(3, 2, &[1, 5, 14, 2, 7]);
        let y = subdivide(&x, 2).unwrap();
        assert_eq!(y.r(), &int_vec(&[1, 6, 5, 14, 2, 7])[..]);
        let z = subdivide(&x, 1).unwrap();
        assert_eq!(z.r(), &int_vec(&[1, 1, 5, 14, 2, 7])[..]);
    }

    #[test]
    fn subdivide_then_smooth_is_identity() {
        let x = ct(3, 2, &[1, 5, 14, 2, 7]);
        for i in 1..=3 {
            let y = subdivide(&x, i).unwrap();
            let back = smooth_at(&y, VertexRef::Path(i)).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn subdivision_sequence_on_ct_8_3() {
        let x = ct(8, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 1, 4, 4]);
        assert_eq!(x.d(), &int_vec(&[2, 2, 2, 2, 2, 2, 2, 2, 8, 2, 2])[..]);
        let seq = SubdivisionSequence::new(vec![3, 4, 4, 7], 8);
        let y = apply_subdivision_sequence(&x, &seq).unwrap();
        assert_eq!(
            y.r(),
            &int_vec(&[1, 2, 5, 13, 8, 3, 7, 4, 5, 6, 7, 8, 1, 4, 4])[..]
        );
        assert_eq!(
            y.d(),
            &int_vec(&[2, 3, 3, 1, 2, 5, 1, 3, 2, 2, 2, 2, 8, 2, 2])[..]
        );
        assert!(validate(&y).valid);
    }

    #[test]
    fn empty_sequence_is_identity_and_bad_sequence_rejected() {
        let x = ct(8, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 1, 4, 4]);
        let id = apply_subdivision_sequence(&x, &SubdivisionSequence::new(vec![], 8)).unwrap();
        assert_eq!(id, x);
        let err = apply_subdivision_sequence(&x, &SubdivisionSequence::new(vec![9], 8)).unwrap_err();
        assert_eq!(
            err,
            TransformError::InvalidSequence {
                index: 1,
                position: 9,
                max: 8
            }
        );
    }

    #[test]
    fn lattice_path_to_sequence() {
        let path = LatticePath::new(8, 4, vec![2, 5, 5, 6]).unwrap();
        let seq = sequence_from_lattice_path(&path);
        assert_eq!(seq.b, vec![3, 4, 4, 7]);
        let empty = LatticePath::new(8, 0, vec![]).unwrap();
        assert_eq!(sequence_from_lattice_path(&empty).b, Vec::<usize>::new());
        let single = LatticePath::new(8, 1, vec![8]).unwrap();
        assert_eq!(sequence_from_lattice_path(&single).b, vec![1]);
        // Crossing above y = x is rejected.
        assert!(LatticePath::new(3, 2, vec![1, 1]).is_err());
    }

    #[test]
    fn descendants_match_exhaustive_on_tiny_cases() {
        let seed = ct(1, 2, &[2, 1, 1]);
        for p in 1..=4 {
            let fast = descendants(&seed, p).unwrap();
            let slow = descendants_exhaustive(&seed, p).unwrap();
            assert_eq!(fast, slow);
        }
        assert_eq!(descendants(&seed, 1).unwrap(), vec![seed.clone()]);
        assert_eq!(descendants(&seed, 3).unwrap().len(), 2); // B(2,2) = C_2
    }

    #[test]
    fn descendants_invert_to_seed() {
        let seed = ct(3, 3, &[2, 4, 6, 3, 3, 2]);
        for x in descendants(&seed, 5).unwrap() {
            assert_eq!(smooth_ancestor(&x).unwrap(), seed);
        }
    }

    #[test]
    fn expand_leaves_cases() {
        let x = ct(3, 3, &[2, 4, 6, 3, 3, 2]);
        let same = expand_leaves(&x, &[], 3).unwrap();
        assert_eq!(same, x);

        let y = expand_leaves(&x, &[2], 4).unwrap();
        assert_eq!(y.r(), &int_vec(&[2, 4, 6, 3, 6, 3, 2])[..]);
        assert!(validate(&y).valid);
        assert!(num_traits::One::is_one(y.d_at_leaf(2)));

        // All slots from a path structure: every leaf carries r_p.
        let path = build_path(3).unwrap();
        let ps = ArithStructure::from_r(path, None, int_vec(&[1, 2, 1])).unwrap();
        let z = expand_leaves(&ps, &[1, 2], 2).unwrap();
        assert_eq!(z.r(), &int_vec(&[1, 2, 1, 1, 1])[..]);
        assert!(validate(&z).valid);

        assert!(matches!(
            expand_leaves(&x, &[2, 2], 5),
            Err(TransformError::LeafSlot(2))
        ));
        assert!(matches!(
            expand_leaves(&x, &[9], 4),
            Err(TransformError::LeafSlot(9))
        ));
    }
}
