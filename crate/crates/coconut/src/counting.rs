//! Closed-form and recursive counts: Catalan numbers, ballot numbers, the
//! A(x, y) table, the coconut tree count, and its path/cycle/bident/star
//! specializations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("ballot number requires 0 <= k <= n, got n = {n}, k = {k}")]
    BallotDomain { n: u64, k: u64 },
    #[error("{name} must be at least {min}, got {got}")]
    Domain {
        name: &'static str,
        min: u64,
        got: u64,
    },
    #[error("oracle has no smooth count for CT({p},{s})")]
    OracleMiss { p: usize, s: usize },
    #[error("cache I/O: {0}")]
    CacheIo(String),
}

/// Exact binomial coefficient, computed multiplicatively with an exact
/// division at every step.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Ballot number `B(n, k) = ((n - k + 1) / (n + 1)) * binom(n + k, n)`:
/// lattice paths from the origin to `(n, k)` not crossing above `y = x`.
pub fn ballot(n: u64, k: u64) -> Result<BigUint, CountError> {
    if k > n {
        return Err(CountError::BallotDomain { n, k });
    }
    Ok(binomial(n + k, n) * BigUint::from(n - k + 1) / BigUint::from(n + 1))
}

/// `|Arith(P_n)| = C_{n-1}` for the path on `n` vertices.
pub fn path_count(n: u64) -> Result<BigUint, CountError> {
    if n == 0 {
        return Err(CountError::Domain {
            name: "n",
            min: 1,
            got: 0,
        });
    }
    Ok(catalan(n - 1))
}

/// `|Arith(C_n)| = binom(2n - 1, n - 1)` for the cycle on `n >= 3` vertices.
pub fn cycle_count(n: u64) -> Result<BigUint, CountError> {
    if n < 3 {
        return Err(CountError::Domain {
            name: "n",
            min: 3,
            got: n,
        });
    }
    Ok(binomial(2 * n - 1, n - 1))
}

/// One smooth-count cell: `|SArith(CT(p,s))|` found by enumeration up to the
/// recorded center bound, with the bound's stability flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub p: usize,
    pub s: usize,
    pub max_c: u64,
    pub smooth_count: u64,
    pub stable: bool,
}

/// Map from `(p, s)` to enumerated smooth-structure counts, with provenance.
/// The counting recursion is only as trustworthy as these inputs, so the
/// search bound and stability flag travel with each entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SmoothCountOracle {
    entries: BTreeMap<(usize, usize), OracleEntry>,
}

impl SmoothCountOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: OracleEntry) {
        self.entries.insert((entry.p, entry.s), entry);
    }

    pub fn get(&self, p: usize, s: usize) -> Result<&OracleEntry, CountError> {
        self.entries
            .get(&(p, s))
            .ok_or(CountError::OracleMiss { p, s })
    }

    pub fn entries(&self) -> impl Iterator<Item = &OracleEntry> {
        self.entries.values()
    }

    pub fn all_stable(&self) -> bool {
        self.entries.values().all(|e| e.stable)
    }

    pub fn min_bound(&self) -> Option<u64> {
        self.entries.values().map(|e| e.max_c).min()
    }

    /// Loads a JSON-lines cache; later lines win for repeated `(p, s)` keys.
    pub fn load_jsonl(path: &Path) -> Result<Self, CountError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CountError::CacheIo(e.to_string()))?;
        let mut oracle = Self::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let entry: OracleEntry =
                serde_json::from_str(line).map_err(|e| CountError::CacheIo(e.to_string()))?;
            oracle.insert(entry);
        }
        Ok(oracle)
    }

    /// Appends all entries as JSON lines (append-only; newest entry wins on
    /// reload).
    pub fn append_jsonl(&self, path: &Path) -> Result<(), CountError> {
        let mut out = String::new();
        for entry in self.entries.values() {
            let line = serde_json::to_string(entry)
                .map_err(|e| CountError::CacheIo(e.to_string()))?;
            let _ = writeln!(out, "{line}");
        }
        use std::io::Write;
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CountError::CacheIo(e.to_string()))?;
        file.write_all(out.as_bytes())
            .map_err(|e| CountError::CacheIo(e.to_string()))?;
        Ok(())
    }
}

/// The three-case table from the counting recursion:
/// `A(x,0) = C_{x-1}`, `A(x,1) = C_{x-1} - C_{x-2}`, and for `y >= 2`
/// `A(x,y) = sum_{i=y+1}^{x} B(x-y-1, x-i) |SArith(CT(i-y, y))|`.
pub fn a_table(x: u64, y: u64, oracle: &SmoothCountOracle) -> Result<BigUint, CountError> {
    match y {
        0 => {
            if x < 1 {
                return Err(CountError::Domain {
                    name: "x",
                    min: 1,
                    got: x,
                });
            }
            Ok(catalan(x - 1))
        }
        1 => {
            if x < 2 {
                return Err(CountError::Domain {
                    name: "x",
                    min: 2,
                    got: x,
                });
            }
            Ok(catalan(x - 1) - catalan(x - 2))
        }
        _ => {
            if x < 3 {
                return Err(CountError::Domain {
                    name: "x",
                    min: 3,
                    got: x,
                });
            }
            let mut total = BigUint::zero();
            for i in y + 1..=x {
                let weight = ballot(x - y - 1, x - i)?;
                let cell = oracle.get((i - y) as usize, y as usize)?;
                total += weight * BigUint::from(cell.smooth_count);
            }
            Ok(total)
        }
    }
}

/// `|Arith(CT(p,s))| = sum_{j=0}^{s} binom(s,j) A(p+s-j, s-j)` for `s >= 2`.
pub fn ct_count(p: u64, s: u64, oracle: &SmoothCountOracle) -> Result<BigUint, CountError> {
    if p < 1 {
        return Err(CountError::Domain {
            name: "p",
            min: 1,
            got: p,
        });
    }
    if s < 2 {
        return Err(CountError::Domain {
            name: "s",
            min: 2,
            got: s,
        });
    }
    let mut total = BigUint::zero();
    for j in 0..=s {
        total += binomial(s, j) * a_table(p + s - j, s - j, oracle)?;
    }
    Ok(total)
}

/// Structures on `CT(p,s)` where no leaf can be smoothed:
/// `sum_{i=1}^{p} B(p-1, p-i) |SArith(CT(i,s))|`.
pub fn nonsmoothable_leaf_count(
    p: u64,
    s: u64,
    oracle: &SmoothCountOracle,
) -> Result<BigUint, CountError> {
    if p < 1 {
        return Err(CountError::Domain {
            name: "p",
            min: 1,
            got: p,
        });
    }
    if s < 2 {
        return Err(CountError::Domain {
            name: "s",
            min: 2,
            got: s,
        });
    }
    let mut total = BigUint::zero();
    for i in 1..=p {
        let weight = ballot(p - 1, p - i)?;
        let cell = oracle.get(i as usize, s as usize)?;
        total += weight * BigUint::from(cell.smooth_count);
    }
    Ok(total)
}
