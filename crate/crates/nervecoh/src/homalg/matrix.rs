//! Canonical sparse matrices with exact integer entries.
//!
//! A [`SparseMatrix`] stores nonzero entries as `(row, col, value)` triplets
//! sorted by `(row, col)`.  Entries are plain integers in every ring; the
//! [`RingSpec`] tag says how they are interpreted, and for a prime field the
//! stored values are the canonical residues `1..p`.  All constructors
//! enforce this canonical form, so equality of matrices is equality of the
//! triplet lists.

use super::ring::RingSpec;
use super::HomalgError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, BigInt)>,
}

fn canonical_value(ring: RingSpec, v: BigInt) -> BigInt {
    match ring {
        RingSpec::PrimeField(p) => v.mod_floor(&BigInt::from(p)),
        _ => v,
    }
}

fn check_size(rows: usize, cols: usize) -> Result<(), HomalgError> {
    if rows > u32::MAX as usize || cols > u32::MAX as usize {
        return Err(HomalgError::MatrixTooLarge { rows, cols });
    }
    Ok(())
}

impl SparseMatrix {
    pub fn zero(ring: RingSpec, rows: usize, cols: usize) -> SparseMatrix {
        check_size(rows, cols).expect("matrix dimensions exceed u32");
        SparseMatrix {
            ring,
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zero(ring, n, n);
        m.entries = (0..n as u32).map(|i| (i, i, BigInt::one())).collect();
        m
    }

    /// Builds a matrix from arbitrary triplets: duplicates are summed, the
    /// sums are canonicalized for the ring, and zeros are dropped.
    pub fn from_triplets(
        ring: RingSpec,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<SparseMatrix, HomalgError> {
        check_size(rows, cols)?;
        let mut raw: Vec<(u32, u32, BigInt)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(HomalgError::EntryOutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            raw.push((r as u32, c as u32, v));
        }
        raw.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, BigInt)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries = entries
            .into_iter()
            .filter_map(|(r, c, v)| {
                let v = canonical_value(ring, v);
                (!v.is_zero()).then_some((r, c, v))
            })
            .collect();
        Ok(SparseMatrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    /// The canonical triplet list, sorted by `(row, col)`.
    pub fn entries(&self) -> &[(u32, u32, BigInt)] {
        &self.entries
    }

    /// The value at `(row, col)` (zero when absent).
    pub fn get(&self, row: usize, col: usize) -> BigInt {
        let key = (row as u32, col as u32);
        match self
            .entries
            .binary_search_by_key(&key, |&(r, c, _)| (r, c))
        {
            Ok(idx) => self.entries[idx].2.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<(u32, u32, BigInt)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix {
            ring: self.ring,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Entrywise multiplication by an integer scalar.
    pub fn scaled(&self, k: &BigInt) -> SparseMatrix {
        let entries = self
            .entries
            .iter()
            .filter_map(|(r, c, v)| {
                let v = canonical_value(self.ring, v * k);
                (!v.is_zero()).then_some((*r, *c, v))
            })
            .collect();
        SparseMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn negated(&self) -> SparseMatrix {
        self.scaled(&BigInt::from(-1))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, HomalgError> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.shape_mismatch("add", other));
        }
        SparseMatrix::from_triplets(
            self.ring,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(r, c, v)| (*r as usize, *c as usize, v.clone())),
        )
    }

    /// `self * other` with exact arithmetic and canonical output.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix, HomalgError> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(self.shape_mismatch("multiply", other));
        }
        // Start offset of each row of `other` in its entry list.
        let mut starts = vec![0usize; other.rows + 2];
        for &(r, _, _) in &other.entries {
            starts[r as usize + 1] += 1;
        }
        for i in 1..starts.len() {
            starts[i] += starts[i - 1];
        }
        let mut entries: Vec<(u32, u32, BigInt)> = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, ref a) = self.entries[i];
                let (lo, hi) = (starts[k as usize], starts[k as usize + 1]);
                for (_, j, b) in &other.entries[lo..hi] {
                    *acc.entry(*j).or_insert_with(BigInt::zero) += a * b;
                }
                i += 1;
            }
            for (j, v) in acc {
                let v = canonical_value(self.ring, v);
                if !v.is_zero() {
                    entries.push((row, j, v));
                }
            }
        }
        Ok(SparseMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    fn check_ring(&self, other: &SparseMatrix) -> Result<(), HomalgError> {
        if self.ring != other.ring {
            return Err(HomalgError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    fn shape_mismatch(&self, op: &'static str, other: &SparseMatrix) -> HomalgError {
        HomalgError::ShapeMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Serializes to the text dump format: a `rows cols` header line followed
    /// by one `row col value` line per nonzero entry in canonical order.
    pub fn to_dump_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for (r, c, v) in &self.entries {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }

    /// Parses the text dump format.  Indices are 0-based; duplicate entries
    /// are summed; values are canonicalized for `ring`.
    pub fn parse_dump(ring: RingSpec, input: &str) -> Result<SparseMatrix, HomalgError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| HomalgError::DumpParse {
                line: 1,
                message: "missing header line".into(),
            })?;
        let parse_usize = |tok: &str, line: usize| -> Result<usize, HomalgError> {
            tok.parse().map_err(|_| HomalgError::DumpParse {
                line,
                message: format!("invalid integer {tok:?}"),
            })
        };
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(HomalgError::DumpParse {
                line: 1,
                message: format!("expected \"rows cols\", got {header:?}"),
            });
        }
        let rows = parse_usize(head[0], 1)?;
        let cols = parse_usize(head[1], 1)?;
        check_size(rows, cols)?;
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(HomalgError::DumpParse {
                    line: lineno,
                    message: format!("expected \"row col value\", got {line:?}"),
                });
            }
            let r = parse_usize(toks[0], lineno)?;
            let c = parse_usize(toks[1], lineno)?;
            let v: BigInt = toks[2].parse().map_err(|_| HomalgError::DumpParse {
                line: lineno,
                message: format!("invalid integer {:?}", toks[2]),
            })?;
            if r >= rows || c >= cols {
                return Err(HomalgError::DumpParse {
                    line: lineno,
                    message: format!("entry ({r}, {c}) outside a {rows} x {cols} matrix"),
                });
            }
            triplets.push((r, c, v));
        }
        SparseMatrix::from_triplets(ring, rows, cols, triplets)
    }
}

/// The pullback matrix of a map of finite index sets.
///
/// For a face map sending each of `points_above` indices to one of
/// `points_below` indices, the pullback acts on functions: the result has
/// one row per upper point `x`, with a single 1 in column `face(x)`.
pub fn pullback_matrix(
    ring: RingSpec,
    points_above: usize,
    points_below: usize,
    face: impl Fn(usize) -> usize,
) -> Result<SparseMatrix, HomalgError> {
    let mut triplets = Vec::with_capacity(points_above);
    for x in 0..points_above {
        let y = face(x);
        if y >= points_below {
            return Err(HomalgError::FaceImageOutOfRange {
                point: x,
                image: y,
                codomain: points_below,
            });
        }
        triplets.push((x, y, BigInt::one()));
    }
    SparseMatrix::from_triplets(ring, points_above, points_below, triplets)
}

/// The alternating sum of face pullbacks
/// `sum_i (-1)^i face_i^*`, mapping functions on `points_below` indices to
/// functions on `points_above` indices.
pub fn simplicial_differential(
    ring: RingSpec,
    points_above: usize,
    points_below: usize,
    faces: &[&dyn Fn(usize) -> usize],
) -> Result<SparseMatrix, HomalgError> {
    let mut triplets = Vec::with_capacity(points_above * faces.len());
    for (i, face) in faces.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for x in 0..points_above {
            let y = face(x);
            if y >= points_below {
                return Err(HomalgError::FaceImageOutOfRange {
                    point: x,
                    image: y,
                    codomain: points_below,
                });
            }
            triplets.push((x, y, BigInt::from(sign)));
        }
    }
    SparseMatrix::from_triplets(ring, points_above, points_below, triplets)
}
