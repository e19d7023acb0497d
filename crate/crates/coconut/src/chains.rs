//! Euclidean chains, the chain-length function F, construction of the unique
//! smooth structure from a center value and leaf labels, and the d_p > 1
//! counting rule.
//!
//! Throughout, `a mod b` is the least non-negative representative.

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{build_coconut_tree, GraphError};
use crate::structures::{gcd_of, ArithStructure, Int, StructureError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("x1 must be positive")]
    ZeroSeed,
    #[error("leaf value at position {0} must be positive")]
    LeafNonPositive(usize),
    #[error("leaf value at position {0} does not divide the center value")]
    LeafNotDivisor(usize),
    #[error("leaf value at position {0} is not a proper divisor of the center value")]
    LeafNotProper(usize),
    #[error("gcd of center and leaf values must be 1")]
    AssignmentGcd,
    #[error("gcd of leaf values must be 1")]
    Gcd,
    #[error("structure must be smooth")]
    NotSmooth,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The sequence `x_1, x_2, ...` with `x_{i+1} = (-x_{i-1}) mod x_i` while
/// `x_i` is neither 0 nor 1, truncated at its last positive term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanChain {
    pub x1: Int,
    pub x2: Int,
    pub terms: Vec<Int>,
}

/// Least non-negative representative of `-a mod m`.
fn neg_mod(a: &Int, m: &Int) -> Int {
    let rem = a % m;
    if rem.is_zero() {
        rem
    } else {
        m - rem
    }
}

pub fn chain(x1: &Int, x2: &Int) -> Result<EuclideanChain, ChainError> {
    if x1.is_zero() {
        return Err(ChainError::ZeroSeed);
    }
    let mut terms = vec![x1.clone()];
    if !x2.is_zero() {
        terms.push(x2.clone());
        loop {
            let cur = &terms[terms.len() - 1];
            if cur.is_one() {
                break;
            }
            let prev = &terms[terms.len() - 2];
            let next = neg_mod(prev, cur);
            if next.is_zero() {
                break;
            }
            terms.push(next);
        }
    }
    Ok(EuclideanChain {
        x1: x1.clone(),
        x2: x2.clone(),
        terms,
    })
}

/// The chain-length function: number of positive terms of the chain seeded
/// at `(x, y)`.
pub fn chain_length(x: &Int, y: &Int) -> Result<usize, ChainError> {
    Ok(chain(x, y)?.terms.len())
}

/// Machine-integer chain length, used by enumeration as a cheap prefilter.
pub fn chain_length_u64(x: u64, y: u64) -> usize {
    debug_assert!(x > 0);
    if y == 0 {
        return 1;
    }
    let (mut prev, mut cur) = (x, y);
    let mut count = 2;
    while cur > 1 {
        let rem = prev % cur;
        if rem == 0 {
            break;
        }
        let next = cur - rem;
        prev = std::mem::replace(&mut cur, next);
        count += 1;
    }
    count
}

/// A center value `c` (which becomes `r_p`) together with ordered leaf
/// values, each a proper divisor of `c`, jointly coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafAssignment {
    pub c: Int,
    pub a: Vec<Int>,
}

impl LeafAssignment {
    pub fn new(c: Int, a: Vec<Int>) -> Result<Self, ChainError> {
        for (idx, value) in a.iter().enumerate() {
            if value.is_zero() {
                return Err(ChainError::LeafNonPositive(idx + 1));
            }
            if !(&c % value).is_zero() {
                return Err(ChainError::LeafNotDivisor(idx + 1));
            }
            if *value >= c {
                return Err(ChainError::LeafNotProper(idx + 1));
            }
        }
        let mut all = a.clone();
        all.push(c.clone());
        if !gcd_of(&all).is_one() {
            return Err(ChainError::AssignmentGcd);
        }
        Ok(LeafAssignment { c, a })
    }

    pub fn leaf_sum(&self) -> Int {
        self.a.iter().sum()
    }
}

/// Builds the unique smooth structure on `CT(p,s)` with `r_p = c` and the
/// given leaf labels: the path labels are the positive terms of the chain
/// seeded at `(c, (-sum a) mod c)`, in reverse, and `p = F(sum a, c) - 1`.
pub fn construct_smooth(assignment: &LeafAssignment) -> Result<ArithStructure, ChainError> {
    let sum = assignment.leaf_sum();
    let x2 = neg_mod(&sum, &assignment.c);
    let path_chain = chain(&assignment.c, &x2)?;
    let p = path_chain.terms.len();
    debug_assert_eq!(p + 1, chain_length(&sum, &assignment.c)?);
    let mut r: Vec<Int> = path_chain.terms.into_iter().rev().collect();
    r.extend(assignment.a.iter().cloned());
    let (graph, shape) = build_coconut_tree(p, assignment.a.len())?;
    let structure = ArithStructure::from_r(graph, Some(shape), r)?;
    debug_assert!(structure.is_smooth().unwrap());
    Ok(structure)
}

/// `d_p > 1`, equivalently `r_p < sum of leaf labels`, for a smooth structure.
pub fn has_dp_gt1(structure: &ArithStructure) -> Result<bool, ChainError> {
    let shape = structure.shape().ok_or(StructureError::Shape)?;
    if !structure.is_smooth()? {
        return Err(ChainError::NotSmooth);
    }
    let dp_gt1 = !structure.d_at_path(shape.p).is_one();
    let leaf_sum: Int = (1..=shape.s).map(|j| structure.r_at_leaf(j).clone()).sum();
    debug_assert_eq!(dp_gt1, *structure.r_at_path(shape.p) < leaf_sum);
    Ok(dp_gt1)
}

fn lcm_of(values: &[Int]) -> Int {
    values.iter().fold(Int::one(), |acc, v| acc.lcm(v))
}

/// Number of smooth structures over the given leaf labels with `d_p > 1`:
/// the size of `S = { n : n * lcm(a) < sum(a) }`, taken from the strict set
/// definition rather than the floor formula (the two differ when `lcm(a)`
/// divides `sum(a)`).
pub fn count_dp_gt1(a: &[Int]) -> Result<u64, ChainError> {
    if !gcd_of(a).is_one() {
        return Err(ChainError::Gcd);
    }
    let l = lcm_of(a);
    let sum: Int = a.iter().sum();
    if sum <= l {
        return Ok(0);
    }
    // Largest m with m * l <= sum - 1.
    let m = (sum - Int::one()) / l;
    Ok(u64::try_from(&m).unwrap_or(u64::MAX))
}

/// Like [`count_dp_gt1`], but keeping only centers `n * lcm(a)` that admit
/// the construction, i.e. those strictly larger than every leaf value.
pub fn count_dp_gt1_constructible(a: &[Int]) -> Result<u64, ChainError> {
    if !gcd_of(a).is_one() {
        return Err(ChainError::Gcd);
    }
    let l = lcm_of(a);
    let sum: Int = a.iter().sum();
    let max_a = a.iter().max().cloned().unwrap_or_else(Int::zero);
    let mut count = 0;
    let mut c = l.clone();
    while c < sum {
        if c > max_a {
            count += 1;
        }
        c += &l;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{int_vec, validate};

    fn f(x: u64, y: u64) -> usize {
        chain_length(&Int::from(x), &Int::from(y)).unwrap()
    }

    #[test]
    fn chain_from_13_60() {
        let c = chain(&Int::from(13u32), &Int::from(60u32)).unwrap();
        assert_eq!(c.terms, int_vec(&[13, 60, 47, 34, 21, 8, 3, 1]));
        assert_eq!(f(13, 60), 8);
    }

    #[test]
    fn short_chains() {
        assert_eq!(chain(&Int::from(7u32), &Int::one()).unwrap().terms, int_vec(&[7, 1]));
        assert_eq!(chain(&Int::one(), &Int::zero()).unwrap().terms, int_vec(&[1]));
        assert!(chain(&Int::zero(), &Int::one()).is_err());
    }

    #[test]
    fn f_closed_forms() {
        for y in 0..20 {
            assert_eq!(f(1, y), (y + 1) as usize);
        }
        for x in 1..20 {
            assert_eq!(f(x, 1), 2);
        }
        // x | y implies F(x, y) = 1 + y/x.
        for x in 1..15u64 {
            for q in 1..15u64 {
                assert_eq!(f(x, q * x), (1 + q) as usize);
            }
        }
    }

    #[test]
    fn chain_length_u64_agrees() {
        for x in 1..60 {
            for y in 0..60 {
                assert_eq!(chain_length_u64(x, y), f(x, y));
            }
        }
    }

    #[test]
    fn chain_terms_strictly_decrease_after_second() {
        let c = chain(&Int::from(13u32), &Int::from(60u32)).unwrap();
        for w in c.terms[1..].windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn construction_from_60_2_3_3_5() {
        let assignment =
            LeafAssignment::new(Int::from(60u32), int_vec(&[2, 3, 3, 5])).unwrap();
        let x = construct_smooth(&assignment).unwrap();
        assert_eq!(x.r(), &int_vec(&[1, 3, 8, 21, 34, 47, 60, 2, 3, 3, 5])[..]);
        assert_eq!(x.shape().unwrap().p, 7);
        assert!(x.is_smooth().unwrap());
        assert!(validate(&x).valid);
        // Center 60 >= leaf sum 13, so d_7 = 1.
        assert!(!has_dp_gt1(&x).unwrap());
    }

    #[test]
    fn both_structures_for_leaves_2_2_3_3_3() {
        let a = int_vec(&[2, 2, 3, 3, 3]);
        let x = construct_smooth(&LeafAssignment::new(Int::from(6u32), a.clone()).unwrap()).unwrap();
        assert_eq!(x.shape().unwrap().p, 6);
        assert_eq!(&x.r()[..6], &int_vec(&[1, 2, 3, 4, 5, 6])[..]);
        assert!(has_dp_gt1(&x).unwrap());

        let y = construct_smooth(&LeafAssignment::new(Int::from(12u32), a).unwrap()).unwrap();
        assert_eq!(y.shape().unwrap().p, 12);
        assert_eq!(
            &y.r()[..12],
            &int_vec(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12])[..]
        );
        assert!(has_dp_gt1(&y).unwrap());
    }

    #[test]
    fn smallest_bident_smooth_structure() {
        let x = construct_smooth(
            &LeafAssignment::new(Int::from(2u32), int_vec(&[1, 1])).unwrap(),
        )
        .unwrap();
        assert_eq!(x.r(), &int_vec(&[2, 1, 1])[..]);
        // No smooth bident structure has d_p > 1.
        assert!(!has_dp_gt1(&x).unwrap());
    }

    #[test]
    fn assignment_validation() {
        assert!(matches!(
            LeafAssignment::new(Int::from(6u32), int_vec(&[4])),
            Err(ChainError::LeafNotDivisor(1))
        ));
        assert!(matches!(
            LeafAssignment::new(Int::from(6u32), int_vec(&[6, 1])),
            Err(ChainError::LeafNotProper(1))
        ));
        assert!(matches!(
            LeafAssignment::new(Int::from(6u32), int_vec(&[2, 2])),
            Err(ChainError::AssignmentGcd)
        ));
        // c = 1 admits no proper divisors at all.
        assert!(LeafAssignment::new(Int::one(), int_vec(&[1])).is_err());
    }

    #[test]
    fn count_for_leaves_2_2_3_3_3() {
        assert_eq!(count_dp_gt1(&int_vec(&[2, 2, 3, 3, 3])).unwrap(), 2);
        assert_eq!(
            count_dp_gt1_constructible(&int_vec(&[2, 2, 3, 3, 3])).unwrap(),
            2
        );
    }

    #[test]
    fn count_dp_gt1_edge_cases() {
        // lcm >= sum: empty S.
        assert_eq!(count_dp_gt1(&int_vec(&[2, 3])).unwrap(), 0);
        // Set definition, not the floor formula: lcm | sum here, and the
        // floor expression would give 2.
        assert_eq!(count_dp_gt1(&int_vec(&[1, 1, 2])).unwrap(), 1);
        assert!(matches!(
            count_dp_gt1(&int_vec(&[2, 4])),
            Err(ChainError::Gcd)
        ));
        // lcm(a) = max(a): center lcm(a) itself is not a proper multiple.
        assert_eq!(count_dp_gt1(&int_vec(&[1, 1, 2])).unwrap(), 1);
        assert_eq!(count_dp_gt1_constructible(&int_vec(&[1, 1, 2])).unwrap(), 0);
    }
}
