//! Arithmetical structures: pairs of positive integer vectors `(d, r)` on a
//! graph satisfying `(diag(d) - A) * r = 0` with `gcd(r) = 1`.
//!
//! Divisibility is always checked as exact integer equality
//! `d_v * r_v = sum of neighbor r-values`, never via division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CoconutShape, Graph, GraphJson};

/// Exact integer type used for all r/d entries.
pub type Int = BigUint;

/// Convenience constructor for r/d vectors from machine integers.
pub fn int_vec(values: &[u64]) -> Vec<Int> {
    values.iter().map(|&v| Int::from(v)).collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("vector has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("entry at vertex {0} is zero; all entries must be positive")]
    NonPositive(usize),
    #[error("r at vertex {0} does not divide its neighbor sum")]
    Divisibility(usize),
    #[error("kernel of diag(d) - A has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("kernel vector has mixed-sign or zero entries; no positive r exists")]
    NonPositiveKernel,
    #[error("gcd of r entries is {0}, expected 1")]
    Gcd(BigUint),
    #[error("operation requires a coconut tree shape")]
    Shape,
}

/// An arithmetical structure, optionally carrying the coconut-tree shape of
/// its graph. Immutable; transforms produce new structures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArithStructure {
    graph: Graph,
    shape: Option<CoconutShape>,
    r: Vec<Int>,
    d: Vec<Int>,
}

/// Reason a vertex (or the whole vector) fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Failure {
    NonPositive { vertex: usize },
    Divisibility { vertex: usize },
    Gcd,
}

/// Outcome of [`validate`]: valid iff `failures` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

fn check_len(graph: &Graph, v: &[Int]) -> Result<(), StructureError> {
    if v.len() != graph.vertex_count() {
        return Err(StructureError::LengthMismatch {
            expected: graph.vertex_count(),
            got: v.len(),
        });
    }
    Ok(())
}

fn neighbor_sum(graph: &Graph, r: &[Int], v: usize) -> Int {
    graph.neighbors(v).iter().map(|&u| r[u].clone()).sum()
}

/// Computes `d` from `r`: `d_v = (sum of neighbor r) / r_v` for every vertex.
pub fn d_from_r(graph: &Graph, r: &[Int]) -> Result<Vec<Int>, StructureError> {
    check_len(graph, r)?;
    let mut d = Vec::with_capacity(r.len());
    for v in 0..graph.vertex_count() {
        if r[v].is_zero() {
            return Err(StructureError::NonPositive(v));
        }
        let sum = neighbor_sum(graph, r, v);
        let (q, rem) = sum.div_rem(&r[v]);
        if !rem.is_zero() {
            return Err(StructureError::Divisibility(v));
        }
        d.push(q);
    }
    Ok(d)
}

/// Recovers the unique primitive positive `r` spanning the kernel of
/// `diag(d) - A`, by exact integer elimination.
pub fn r_from_d(graph: &Graph, d: &[Int]) -> Result<Vec<Int>, StructureError> {
    check_len(graph, d)?;
    for (v, entry) in d.iter().enumerate() {
        if entry.is_zero() {
            return Err(StructureError::NonPositive(v));
        }
    }
    let n = graph.vertex_count();
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for v in 0..n {
        m[v][v] = BigInt::from(d[v].clone());
        for &u in graph.neighbors(v) {
            m[v][u] = -BigInt::one();
        }
    }
    let kernel = integer_kernel(&mut m, n)?;
    let r: Vec<Int> = kernel
        .into_iter()
        .map(|x| {
            if x.is_positive() {
                Ok(x.to_biguint().unwrap())
            } else {
                Err(StructureError::NonPositiveKernel)
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(r)
}

/// Fraction-free row elimination to echelon form, then exact back
/// substitution for the one-dimensional kernel. Returns the primitive
/// integer kernel vector with positive leading sign.
fn integer_kernel(m: &mut [Vec<BigInt>], n: usize) -> Result<Vec<BigInt>, StructureError> {
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        // Smallest nonzero pivot keeps intermediate entries modest.
        let pivot_row = (row..n)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].abs());
        let Some(pivot_row) = pivot_row else { continue };
        m.swap(row, pivot_row);
        for i in row + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let g = m[i][col].gcd(&m[row][col]);
            let a = &m[row][col] / &g;
            let b = &m[i][col] / &g;
            // Index loop: rows `i` and `row` are borrowed from `m` at once.
            #[allow(clippy::needless_range_loop)]
            for j in 0..n {
                m[i][j] = &m[i][j] * &a - &m[row][j] * &b;
            }
            let row_gcd = m[i].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !row_gcd.is_zero() && !row_gcd.is_one() {
                for x in m[i].iter_mut() {
                    *x /= &row_gcd;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let rank = pivot_cols.len();
    if rank != n - 1 {
        return Err(StructureError::KernelDimension(n - rank));
    }
    let free_col = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut x = vec![BigRational::zero(); n];
    x[free_col] = BigRational::one();
    for (i, &col) in pivot_cols.iter().enumerate().rev() {
        let mut sum = BigRational::zero();
        for j in col + 1..n {
            if !m[i][j].is_zero() {
                sum += BigRational::from_integer(m[i][j].clone()) * &x[j];
            }
        }
        x[col] = -sum / BigRational::from_integer(m[i][col].clone());
    }
    // Clear denominators and reduce to a primitive vector.
    let denom_lcm = x
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = x
        .iter()
        .map(|q| q.numer() * (&denom_lcm / q.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return Err(StructureError::NonPositiveKernel);
    }
    for v in ints.iter_mut() {
        *v /= &g;
    }
    let leading = ints.iter().find(|v| !v.is_zero()).unwrap();
    if leading.is_negative() {
        for v in ints.iter_mut() {
            *v = -v.clone();
        }
    }
    Ok(ints)
}

pub fn gcd_of(values: &[Int]) -> Int {
    values.iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

impl ArithStructure {
    /// Builds a structure from its `r`-vector, deriving `d`. The pair must
    /// satisfy the defining equation and `gcd(r) = 1`.
    pub fn from_r(
        graph: Graph,
        shape: Option<CoconutShape>,
        r: Vec<Int>,
    ) -> Result<Self, StructureError> {
        let d = d_from_r(&graph, &r)?;
        let g = gcd_of(&r);
        if !g.is_one() {
            return Err(StructureError::Gcd(g));
        }
        Ok(ArithStructure { graph, shape, r, d })
    }

    /// Builds a structure from its `d`-vector, recovering the unique `r`.
    pub fn from_d(
        graph: Graph,
        shape: Option<CoconutShape>,
        d: Vec<Int>,
    ) -> Result<Self, StructureError> {
        let r = r_from_d(&graph, &d)?;
        Ok(ArithStructure { graph, shape, r, d })
    }

    /// Builds from explicit vectors without checking the defining equation;
    /// used to assemble candidate pairs for [`validate`].
    pub fn unchecked(
        graph: Graph,
        shape: Option<CoconutShape>,
        r: Vec<Int>,
        d: Vec<Int>,
    ) -> Self {
        ArithStructure { graph, shape, r, d }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shape(&self) -> Option<CoconutShape> {
        self.shape
    }

    pub fn r(&self) -> &[Int] {
        &self.r
    }

    pub fn d(&self) -> &[Int] {
        &self.d
    }

    pub fn r_at_path(&self, k: usize) -> &Int {
        &self.r[self.shape.expect("shape required").path_index(k)]
    }

    pub fn r_at_leaf(&self, j: usize) -> &Int {
        &self.r[self.shape.expect("shape required").leaf_index(j)]
    }

    pub fn d_at_path(&self, k: usize) -> &Int {
        &self.d[self.shape.expect("shape required").path_index(k)]
    }

    pub fn d_at_leaf(&self, j: usize) -> &Int {
        &self.d[self.shape.expect("shape required").leaf_index(j)]
    }

    /// True iff `d >= 2` at every vertex except possibly the central one.
    /// Requires a coconut-tree shape.
    pub fn is_smooth(&self) -> Result<bool, StructureError> {
        let shape = self.shape.ok_or(StructureError::Shape)?;
        let two = Int::from(2u32);
        for k in 1..shape.p {
            if self.d[shape.path_index(k)] < two {
                return Ok(false);
            }
        }
        for j in 1..=shape.s {
            if self.d[shape.leaf_index(j)] < two {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Checks every vertex condition and the gcd condition, reporting all
/// violations rather than stopping at the first.
pub fn validate(structure: &ArithStructure) -> ValidationReport {
    let graph = structure.graph();
    let r = structure.r();
    let d = structure.d();
    let mut failures = Vec::new();
    debug_assert_eq!(r.len(), graph.vertex_count());
    debug_assert_eq!(d.len(), graph.vertex_count());
    for v in 0..graph.vertex_count() {
        if r[v].is_zero() || d[v].is_zero() {
            failures.push(Failure::NonPositive { vertex: v });
            continue;
        }
        let sum = neighbor_sum(graph, r, v);
        if &d[v] * &r[v] != sum {
            failures.push(Failure::Divisibility { vertex: v });
        }
    }
    if !gcd_of(r).is_one() {
        failures.push(Failure::Gcd);
    }
    ValidationReport {
        valid: failures.is_empty(),
        failures,
    }
}

/// JSON structure form: graph plus r/d vectors in path-then-leaves order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureJson {
    pub graph: GraphJson,
    pub r: Vec<u64>,
    pub d: Vec<u64>,
}

#[derive(Debug, Error)]
pub enum StructureJsonError {
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("entry too large for JSON emission")]
    TooLarge,
}

impl StructureJson {
    pub fn from_structure(structure: &ArithStructure) -> Result<Self, StructureJsonError> {
        let to_u64 = |v: &[Int]| -> Result<Vec<u64>, StructureJsonError> {
            v.iter()
                .map(|x| u64::try_from(x).map_err(|_| StructureJsonError::TooLarge))
                .collect()
        };
        Ok(StructureJson {
            graph: GraphJson::from_graph(structure.graph(), structure.shape()),
            r: to_u64(structure.r())?,
            d: to_u64(structure.d())?,
        })
    }

    pub fn to_structure(&self) -> Result<ArithStructure, StructureJsonError> {
        let (graph, shape) = self.graph.to_graph()?;
        Ok(ArithStructure::from_r(graph, shape, int_vec(&self.r))?)
    }
}
