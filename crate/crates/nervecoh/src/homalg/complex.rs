//! Validated cochain complexes and their cohomology.
//!
//! A [`GradedComplex`] holds dimensions `dims[0..=N]` and differentials
//! `d[n]: level n -> level n + 1` for `n < N`; the constructor checks all
//! shapes and that consecutive differentials compose to zero, so a value of
//! this type is always a genuine complex.
//!
//! Cohomology at degree `n` is reported as a [`BettiEntry`]: the free rank
//! `dims[n] - rank(d_n) - rank(d_{n-1})` together with, over the integers,
//! the torsion invariant factors of `d_{n-1}` that exceed 1.

use super::elim::rank;
use super::matrix::SparseMatrix;
use super::ring::RingSpec;
use super::snf::invariant_factors;
use super::HomalgError;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// Cohomology of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiEntry {
    pub degree: usize,
    /// Free rank of the cohomology group.
    pub betti: usize,
    /// Nontrivial invariant factors (each > 1), in a divisibility chain;
    /// empty over a field.
    pub torsion: Vec<BigInt>,
}

impl BettiEntry {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Renders the group, e.g. `Z^2 + Z/2 + Z/4` or `0`.
    pub fn group_name(&self, ring: RingSpec) -> String {
        let free_symbol = match ring {
            RingSpec::Integers => "Z".to_string(),
            RingSpec::Rationals => "Q".to_string(),
            RingSpec::PrimeField(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push(free_symbol.clone()),
            k => parts.push(format!("{free_symbol}^{k}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Cohomology over a degree range, with its coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub ring: RingSpec,
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.betti).collect()
    }

    pub fn degree(&self, n: usize) -> Option<&BettiEntry> {
        self.entries.iter().find(|e| e.degree == n)
    }

    /// True when free ranks and torsion agree degree by degree.
    pub fn same_groups(&self, other: &BettiTable) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a == b)
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree  group")?;
        for e in &self.entries {
            writeln!(f, "{:<7} {}", e.degree, e.group_name(self.ring))?;
        }
        Ok(())
    }
}

/// A bounded cochain complex with validated differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    ring: RingSpec,
    dims: Vec<usize>,
    d: Vec<SparseMatrix>,
}

impl GradedComplex {
    /// Validates shapes, rings, and `d o d = 0`, in that order.
    pub fn new(
        ring: RingSpec,
        dims: Vec<usize>,
        d: Vec<SparseMatrix>,
    ) -> Result<GradedComplex, HomalgError> {
        if dims.is_empty() || d.len() + 1 != dims.len() {
            return Err(HomalgError::DifferentialShape {
                degree: d.len(),
                rows: 0,
                cols: 0,
                expected_rows: 0,
                expected_cols: 0,
            });
        }
        for (n, m) in d.iter().enumerate() {
            if m.ring() != ring {
                return Err(HomalgError::RingMismatch {
                    left: ring,
                    right: m.ring(),
                });
            }
            if m.rows() != dims[n + 1] || m.cols() != dims[n] {
                return Err(HomalgError::DifferentialShape {
                    degree: n,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: dims[n + 1],
                    expected_cols: dims[n],
                });
            }
        }
        for n in 0..d.len().saturating_sub(1) {
            if !d[n + 1].matmul(&d[n])?.is_zero_matrix() {
                return Err(HomalgError::NotAComplex { degree: n });
            }
        }
        Ok(GradedComplex { ring, dims, d })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Highest level carried by the (truncated) complex.
    pub fn max_level(&self) -> usize {
        self.dims.len() - 1
    }

    /// Highest degree whose cohomology is determined by the truncation.
    pub fn max_computable_degree(&self) -> Option<usize> {
        self.max_level().checked_sub(1)
    }

    pub fn differential(&self, n: usize) -> Option<&SparseMatrix> {
        self.d.get(n)
    }

    /// Cohomology at a single degree.
    pub fn cohomology(&self, n: usize) -> Result<BettiEntry, HomalgError> {
        if self.max_computable_degree().map(|m| n > m).unwrap_or(true) {
            return Err(HomalgError::InsufficientTruncation {
                degree: n,
                needed: n + 1,
            });
        }
        let rank_out = rank(&self.d[n]);
        let rank_in = if n == 0 { 0 } else { rank(&self.d[n - 1]) };
        self.entry(n, rank_out, rank_in)
    }

    fn entry(&self, n: usize, rank_out: usize, rank_in: usize) -> Result<BettiEntry, HomalgError> {
        let betti = self.dims[n]
            .checked_sub(rank_out)
            .and_then(|k| k.checked_sub(rank_in))
            .ok_or(HomalgError::RankInconsistency { degree: n })?;
        let torsion = if self.ring == RingSpec::Integers && n > 0 {
            invariant_factors(&self.d[n - 1])?
                .into_iter()
                .filter(|f| !f.is_one())
                .collect()
        } else {
            Vec::new()
        };
        Ok(BettiEntry {
            degree: n,
            betti,
            torsion,
        })
    }

    /// Cohomology at all degrees `0..=max_degree`, computing each rank once.
    pub fn betti_table(&self, max_degree: usize) -> Result<BettiTable, HomalgError> {
        if self
            .max_computable_degree()
            .map(|m| max_degree > m)
            .unwrap_or(true)
        {
            return Err(HomalgError::InsufficientTruncation {
                degree: max_degree,
                needed: max_degree + 1,
            });
        }
        let ranks: Vec<usize> = (0..=max_degree).map(|n| rank(&self.d[n])).collect();
        let mut entries = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let rank_in = if n == 0 { 0 } else { ranks[n - 1] };
            entries.push(self.entry(n, ranks[n], rank_in)?);
        }
        Ok(BettiTable {
            ring: self.ring,
            entries,
        })
    }
}
