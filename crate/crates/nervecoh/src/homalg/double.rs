//! Double and triple complexes, totalization, and a column-wise
//! quasi-isomorphism test.
//!
//! A spec stores explicit dimensions and differential blocks for every
//! position with total degree at most `truncation`.  Sign conventions are
//! the caller's responsibility: the stored vertical (and internal) blocks
//! are expected to already carry whatever alternating signs make the three
//! square-zero laws and the pairwise anticommutation laws hold, and
//! [`DoubleComplexSpec::validate`] checks exactly those laws with exact
//! arithmetic, naming the offending position.
//!
//! Totalization concatenates the blocks of each antidiagonal in order of
//! ascending first index (lexicographic for triple complexes) and returns a
//! [`GradedComplex`], which re-verifies that the assembled differential
//! squares to zero.
//!
//! [`check_column_quasi_iso_total`] takes a map of double complexes, forms
//! the mapping cone of every column (fixed first index, vertical
//! differential) including the cone's degree below zero, and reports which
//! columns are acyclic, alongside a direct comparison of the two totalized
//! cohomologies.

use super::complex::{BettiTable, GradedComplex};
use super::matrix::SparseMatrix;
use super::ring::RingSpec;
use super::HomalgError;
use num_bigint::BigInt;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct DoubleComplexSpec {
    pub ring: RingSpec,
    /// All positions with `p + q <= truncation` must be present.
    pub truncation: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
    /// Block `(p, q)` maps position `(p, q)` to `(p + 1, q)`.
    pub d_horiz: BTreeMap<(usize, usize), SparseMatrix>,
    /// Block `(p, q)` maps position `(p, q)` to `(p, q + 1)`.
    pub d_vert: BTreeMap<(usize, usize), SparseMatrix>,
}

fn block_check(
    direction: &'static str,
    at: (usize, usize),
    m: &SparseMatrix,
    ring: RingSpec,
    expected_rows: usize,
    expected_cols: usize,
) -> Result<(), HomalgError> {
    if m.ring() != ring {
        return Err(HomalgError::RingMismatch {
            left: ring,
            right: m.ring(),
        });
    }
    if m.rows() != expected_rows || m.cols() != expected_cols {
        return Err(HomalgError::BlockShape {
            direction,
            at: at.into(),
            rows: m.rows(),
            cols: m.cols(),
            expected_rows,
            expected_cols,
        });
    }
    Ok(())
}

impl DoubleComplexSpec {
    /// Dimension at a position (0 outside the stored range).
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    fn horiz(&self, p: usize, q: usize) -> Result<&SparseMatrix, HomalgError> {
        self.d_horiz
            .get(&(p, q))
            .ok_or(HomalgError::MissingDifferential {
                direction: "horizontal",
                at: (p, q).into(),
            })
    }

    fn vert(&self, p: usize, q: usize) -> Result<&SparseMatrix, HomalgError> {
        self.d_vert
            .get(&(p, q))
            .ok_or(HomalgError::MissingDifferential {
                direction: "vertical",
                at: (p, q).into(),
            })
    }

    /// Checks presence, shapes, both square-zero laws, and anticommutation,
    /// reporting the first offending position.
    pub fn validate(&self) -> Result<(), HomalgError> {
        for n in 0..=self.truncation {
            for p in 0..=n {
                let q = n - p;
                if !self.dims.contains_key(&(p, q)) {
                    return Err(HomalgError::MissingDimension { at: (p, q).into() });
                }
            }
        }
        for n in 0..self.truncation {
            for p in 0..=n {
                let q = n - p;
                let h = self.horiz(p, q)?;
                block_check("horizontal", (p, q), h, self.ring, self.dim(p + 1, q), self.dim(p, q))?;
                let v = self.vert(p, q)?;
                block_check("vertical", (p, q), v, self.ring, self.dim(p, q + 1), self.dim(p, q))?;
            }
        }
        for n in 0..self.truncation.saturating_sub(1) {
            for p in 0..=n {
                let q = n - p;
                if !self.horiz(p + 1, q)?.matmul(self.horiz(p, q)?)?.is_zero_matrix() {
                    return Err(HomalgError::SquareNotZero {
                        direction: "horizontal",
                        at: (p, q).into(),
                    });
                }
                if !self.vert(p, q + 1)?.matmul(self.vert(p, q)?)?.is_zero_matrix() {
                    return Err(HomalgError::SquareNotZero {
                        direction: "vertical",
                        at: (p, q).into(),
                    });
                }
                let a = self.vert(p + 1, q)?.matmul(self.horiz(p, q)?)?;
                let b = self.horiz(p, q + 1)?.matmul(self.vert(p, q)?)?;
                if !a.add(&b)?.is_zero_matrix() {
                    return Err(HomalgError::AnticommuteFailure {
                        first: "horizontal",
                        second: "vertical",
                        at: (p, q).into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The complex along `q` at fixed `p`, with the stored vertical blocks.
    ///
    /// The spec should have passed [`DoubleComplexSpec::validate`]; the
    /// constructor still re-checks shapes and `d o d = 0`.
    pub fn column_complex(&self, p: usize) -> Result<GradedComplex, HomalgError> {
        let top = self.truncation.checked_sub(p).ok_or(
            HomalgError::MissingDimension { at: (p, 0).into() },
        )?;
        let dims: Vec<usize> = (0..=top).map(|q| self.dim(p, q)).collect();
        let d: Vec<SparseMatrix> = (0..top)
            .map(|q| self.vert(p, q).cloned())
            .collect::<Result<_, _>>()?;
        GradedComplex::new(self.ring, dims, d)
    }
}

/// Positions and total dimension of one antidiagonal, ascending in `p`.
fn double_level(spec: &DoubleComplexSpec, n: usize) -> (Vec<((usize, usize), usize)>, usize) {
    let mut offset = 0;
    let mut blocks = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let q = n - p;
        blocks.push(((p, q), offset));
        offset += spec.dim(p, q);
    }
    (blocks, offset)
}

/// Assembles the total complex of a validated double complex.
pub fn totalize_double(spec: &DoubleComplexSpec) -> Result<GradedComplex, HomalgError> {
    spec.validate()?;
    let mut dims = Vec::with_capacity(spec.truncation + 1);
    let mut levels = Vec::with_capacity(spec.truncation + 1);
    for n in 0..=spec.truncation {
        let (blocks, total) = double_level(spec, n);
        dims.push(total);
        levels.push(blocks);
    }
    let mut d = Vec::with_capacity(spec.truncation);
    for n in 0..spec.truncation {
        let next: BTreeMap<(usize, usize), usize> = levels[n + 1].iter().cloned().collect();
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for &((p, q), col_off) in &levels[n] {
            for (m, target) in [(spec.horiz(p, q)?, (p + 1, q)), (spec.vert(p, q)?, (p, q + 1))] {
                let row_off = next[&target];
                for (r, c, v) in m.entries() {
                    triplets.push((row_off + *r as usize, col_off + *c as usize, v.clone()));
                }
            }
        }
        d.push(SparseMatrix::from_triplets(
            spec.ring,
            dims[n + 1],
            dims[n],
            triplets,
        )?);
    }
    GradedComplex::new(spec.ring, dims, d)
}

#[derive(Clone, Debug)]
pub struct TripleComplexSpec {
    pub ring: RingSpec,
    /// All positions with `p + q + r <= truncation` must be present.
    pub truncation: usize,
    pub dims: BTreeMap<(usize, usize, usize), usize>,
    /// Raises `p`.
    pub d_first: BTreeMap<(usize, usize, usize), SparseMatrix>,
    /// Raises `q`.
    pub d_second: BTreeMap<(usize, usize, usize), SparseMatrix>,
    /// Raises `r`.
    pub d_third: BTreeMap<(usize, usize, usize), SparseMatrix>,
}

impl TripleComplexSpec {
    pub fn dim(&self, p: usize, q: usize, r: usize) -> usize {
        self.dims.get(&(p, q, r)).copied().unwrap_or(0)
    }

    fn block(
        &self,
        direction: &'static str,
        at: (usize, usize, usize),
    ) -> Result<&SparseMatrix, HomalgError> {
        let map = match direction {
            "first" => &self.d_first,
            "second" => &self.d_second,
            _ => &self.d_third,
        };
        map.get(&at).ok_or(HomalgError::MissingDifferential {
            direction,
            at: at.into(),
        })
    }

    fn positions(&self, max_total: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for n in 0..=max_total {
            for p in 0..=n {
                for q in 0..=(n - p) {
                    out.push((p, q, n - p - q));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), HomalgError> {
        for &(p, q, r) in &self.positions(self.truncation) {
            if !self.dims.contains_key(&(p, q, r)) {
                return Err(HomalgError::MissingDimension { at: (p, q, r).into() });
            }
        }
        if self.truncation == 0 {
            return Ok(());
        }
        for &(p, q, r) in &self.positions(self.truncation - 1) {
            let at = (p, q, r);
            block_check(
                "first",
                (0, 0),
                self.block("first", at)?,
                self.ring,
                self.dim(p + 1, q, r),
                self.dim(p, q, r),
            )
            .map_err(|e| retag3(e, "first", at))?;
            block_check(
                "second",
                (0, 0),
                self.block("second", at)?,
                self.ring,
                self.dim(p, q + 1, r),
                self.dim(p, q, r),
            )
            .map_err(|e| retag3(e, "second", at))?;
            block_check(
                "third",
                (0, 0),
                self.block("third", at)?,
                self.ring,
                self.dim(p, q, r + 1),
                self.dim(p, q, r),
            )
            .map_err(|e| retag3(e, "third", at))?;
        }
        if self.truncation == 1 {
            return Ok(());
        }
        for &(p, q, r) in &self.positions(self.truncation - 2) {
            let at = (p, q, r);
            let pairs: [(&'static str, (usize, usize, usize)); 3] = [
                ("first", (p + 1, q, r)),
                ("second", (p, q + 1, r)),
                ("third", (p, q, r + 1)),
            ];
            for (dir, shifted) in pairs {
                if !self
                    .block(dir, shifted)?
                    .matmul(self.block(dir, at)?)?
                    .is_zero_matrix()
                {
                    return Err(HomalgError::SquareNotZero {
                        direction: dir,
                        at: at.into(),
                    });
                }
            }
            let anticommute = |d1: &'static str, d2: &'static str, shift1: (usize, usize, usize), shift2: (usize, usize, usize)| -> Result<bool, HomalgError> {
                let a = self.block(d2, shift1)?.matmul(self.block(d1, at)?)?;
                let b = self.block(d1, shift2)?.matmul(self.block(d2, at)?)?;
                Ok(a.add(&b)?.is_zero_matrix())
            };
            for (d1, d2, s1, s2) in [
                ("first", "second", (p + 1, q, r), (p, q + 1, r)),
                ("first", "third", (p + 1, q, r), (p, q, r + 1)),
                ("second", "third", (p, q + 1, r), (p, q, r + 1)),
            ] {
                if !anticommute(d1, d2, s1, s2)? {
                    return Err(HomalgError::AnticommuteFailure {
                        first: d1,
                        second: d2,
                        at: at.into(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn retag3(e: HomalgError, direction: &'static str, at: (usize, usize, usize)) -> HomalgError {
    match e {
        HomalgError::BlockShape {
            rows,
            cols,
            expected_rows,
            expected_cols,
            ..
        } => HomalgError::BlockShape {
            direction,
            at: at.into(),
            rows,
            cols,
            expected_rows,
            expected_cols,
        },
        other => other,
    }
}

/// Assembles the total complex of a validated triple complex; blocks on each
/// level are ordered lexicographically by `(p, q, r)`.
pub fn totalize_triple(spec: &TripleComplexSpec) -> Result<GradedComplex, HomalgError> {
    spec.validate()?;
    let mut dims = Vec::with_capacity(spec.truncation + 1);
    let mut levels: Vec<Vec<((usize, usize, usize), usize)>> = Vec::new();
    for n in 0..=spec.truncation {
        let mut positions: Vec<(usize, usize, usize)> = Vec::new();
        for p in 0..=n {
            for q in 0..=(n - p) {
                positions.push((p, q, n - p - q));
            }
        }
        positions.sort_unstable();
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(positions.len());
        for at in positions {
            blocks.push((at, offset));
            offset += spec.dim(at.0, at.1, at.2);
        }
        dims.push(offset);
        levels.push(blocks);
    }
    let mut d = Vec::with_capacity(spec.truncation);
    for n in 0..spec.truncation {
        let next: BTreeMap<(usize, usize, usize), usize> =
            levels[n + 1].iter().cloned().collect();
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for &((p, q, r), col_off) in &levels[n] {
            let images = [
                ("first", (p + 1, q, r)),
                ("second", (p, q + 1, r)),
                ("third", (p, q, r + 1)),
            ];
            for (dir, target) in images {
                let m = spec.block(dir, (p, q, r))?;
                let row_off = next[&target];
                for (rr, cc, v) in m.entries() {
                    triplets.push((row_off + *rr as usize, col_off + *cc as usize, v.clone()));
                }
            }
        }
        d.push(SparseMatrix::from_triplets(
            spec.ring,
            dims[n + 1],
            dims[n],
            triplets,
        )?);
    }
    GradedComplex::new(spec.ring, dims, d)
}

/// A levelwise map of double complexes `source -> target` commuting with
/// both differentials.
#[derive(Clone, Debug)]
pub struct DoubleComplexMap {
    pub source: DoubleComplexSpec,
    pub target: DoubleComplexSpec,
    /// Block at `(p, q)`: a `target.dim(p, q) x source.dim(p, q)` matrix.
    pub blocks: BTreeMap<(usize, usize), SparseMatrix>,
}

impl DoubleComplexMap {
    fn block(&self, p: usize, q: usize) -> Result<&SparseMatrix, HomalgError> {
        self.blocks
            .get(&(p, q))
            .ok_or(HomalgError::MissingMapBlock { at: (p, q).into() })
    }

    pub fn validate(&self) -> Result<(), HomalgError> {
        self.source.validate()?;
        self.target.validate()?;
        if self.source.ring != self.target.ring {
            return Err(HomalgError::RingMismatch {
                left: self.source.ring,
                right: self.target.ring,
            });
        }
        if self.source.truncation != self.target.truncation {
            return Err(HomalgError::TruncationMismatch(
                self.source.truncation,
                self.target.truncation,
            ));
        }
        let t = self.source.truncation;
        for n in 0..=t {
            for p in 0..=n {
                let q = n - p;
                block_check(
                    "map",
                    (p, q),
                    self.block(p, q)?,
                    self.source.ring,
                    self.target.dim(p, q),
                    self.source.dim(p, q),
                )?;
            }
        }
        for n in 0..t {
            for p in 0..=n {
                let q = n - p;
                let lhs = self.block(p + 1, q)?.matmul(self.source.horiz(p, q)?)?;
                let rhs = self.target.horiz(p, q)?.matmul(self.block(p, q)?)?;
                if lhs != rhs {
                    return Err(HomalgError::NotChainMap {
                        direction: "horizontal",
                        at: (p, q).into(),
                    });
                }
                let lhs = self.block(p, q + 1)?.matmul(self.source.vert(p, q)?)?;
                let rhs = self.target.vert(p, q)?.matmul(self.block(p, q)?)?;
                if lhs != rhs {
                    return Err(HomalgError::NotChainMap {
                        direction: "vertical",
                        at: (p, q).into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Outcome for one column `p`: Betti numbers of the mapping cone of the
/// column map, listed from the cone's lowest degree upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnCheck {
    pub p: usize,
    /// Cone cohomology at cone levels `0..`; all zero exactly when the
    /// column map is a quasi-isomorphism in the checked range.
    pub cone_betti: Vec<usize>,
    pub quasi_iso: bool,
}

/// Report of [`check_column_quasi_iso_total`].
#[derive(Clone, Debug)]
pub struct QuasiIsoReport {
    pub columns: Vec<ColumnCheck>,
    pub all_columns_pass: bool,
    pub source_total: BettiTable,
    pub target_total: BettiTable,
    pub totals_agree: bool,
}

impl QuasiIsoReport {
    /// True when every checked column is a quasi-isomorphism and the two
    /// totalized cohomologies agree.
    pub fn verdict(&self) -> bool {
        self.all_columns_pass && self.totals_agree
    }

    pub fn failing_columns(&self) -> Vec<usize> {
        self.columns
            .iter()
            .filter(|c| !c.quasi_iso)
            .map(|c| c.p)
            .collect()
    }
}

/// Checks that each column of `map` (fixed `p`, vertical direction) is a
/// quasi-isomorphism, by testing its mapping cone for acyclicity, and
/// compares the totalized cohomologies of source and target through
/// `max_degree`.
///
/// The cone of a column map `f: S -> T` is taken with its full support: cone
/// level `m` is `T^(m-1) + S^m`, so level 0 is `S^0` and the bottom degree
/// participates in the acyclicity test.
pub fn check_column_quasi_iso_total(
    map: &DoubleComplexMap,
    max_degree: usize,
) -> Result<QuasiIsoReport, HomalgError> {
    map.validate()?;
    let t = map.source.truncation;
    if max_degree + 1 > t {
        return Err(HomalgError::InsufficientTruncation {
            degree: max_degree,
            needed: max_degree + 1,
        });
    }
    let ring = map.source.ring;
    let mut columns = Vec::new();
    for p in 0..=max_degree.min(t.saturating_sub(2)) {
        let top = t - p; // cone levels 0..=top
        let cone_dims: Vec<usize> = (0..=top)
            .map(|m| {
                let t_part = if m == 0 { 0 } else { map.target.dim(p, m - 1) };
                t_part + map.source.dim(p, m)
            })
            .collect();
        let mut cone_d = Vec::with_capacity(top);
        for m in 0..top {
            let t_cols = if m == 0 { 0 } else { map.target.dim(p, m - 1) };
            let t_rows = map.target.dim(p, m);
            let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
            if m > 0 {
                for (r, c, v) in map.target.vert(p, m - 1)?.entries() {
                    triplets.push((*r as usize, *c as usize, v.clone()));
                }
            }
            for (r, c, v) in map.block(p, m)?.entries() {
                triplets.push((*r as usize, t_cols + *c as usize, v.clone()));
            }
            for (r, c, v) in map.source.vert(p, m)?.entries() {
                triplets.push((t_rows + *r as usize, t_cols + *c as usize, -v.clone()));
            }
            cone_d.push(SparseMatrix::from_triplets(
                ring,
                cone_dims[m + 1],
                cone_dims[m],
                triplets,
            )?);
        }
        let cone = GradedComplex::new(ring, cone_dims, cone_d)?;
        let table = cone.betti_table(top - 1)?;
        let quasi_iso = table.entries.iter().all(|e| e.is_trivial());
        columns.push(ColumnCheck {
            p,
            cone_betti: table.betti_numbers(),
            quasi_iso,
        });
    }
    let all_columns_pass = columns.iter().all(|c| c.quasi_iso);
    let source_total = totalize_double(&map.source)?.betti_table(max_degree)?;
    let target_total = totalize_double(&map.target)?.betti_table(max_degree)?;
    let totals_agree = source_total.same_groups(&target_total);
    Ok(QuasiIsoReport {
        columns,
        all_columns_pass,
        source_total,
        target_total,
        totals_agree,
    })
}
