//! Sparse elimination engine for exact rank computation.
//!
//! The engine works column by column: it repeatedly picks the live column
//! with the fewest nonzero entries (a lazy min-heap keeps this cheap), picks
//! the pivot entry in it with the smallest magnitude and sparsest row, and
//! clears the column from every other live row.  The pivot row is then
//! retired.  The number of retired rows is the rank.
//!
//! Scalar arithmetic is pluggable:
//!
//! * over the integers and rationals, rows are combined fraction-free as
//!   `pivot * row - entry * pivot_row` and then divided by their content;
//!   an `i128` backend detects overflow so the caller can rerun the whole
//!   computation with big integers;
//! * over a prime field, rows are combined with a modular inverse.
//!
//! A second mode restricts pivots to entries of absolute value one and skips
//! the content division.  Every row operation is then unimodular, and a
//! cleared pivot splits off as an invariant factor 1; the Smith normal form
//! code uses this to shrink a sparse matrix before going dense.

use super::matrix::SparseMatrix;
use super::ring::{invmod, RingSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Exact integer scalars usable in the fraction-free backend.
pub(crate) trait ExactInt: Clone + PartialEq {
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_abs_one(&self) -> bool;
    /// Bit length of the absolute value; pivot preference.
    fn bits(&self) -> u32;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn gcd_abs(&self, o: &Self) -> Self;
    fn exact_div(&self, o: &Self) -> Self;
}

impl ExactInt for i128 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_abs_one(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn bits(&self) -> u32 {
        128 - self.unsigned_abs().leading_zeros()
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i128::checked_sub(*self, *o)
    }
    fn checked_neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn gcd_abs(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), o.unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a as i128
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactInt for BigInt {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_abs_one(&self) -> bool {
        self.abs().is_one()
    }
    fn bits(&self) -> u32 {
        self.bits().min(u32::MAX as u64) as u32
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd_abs(&self, o: &Self) -> Self {
        num_integer::Integer::gcd(self, o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

/// A scalar backend: the row combination step plus pivot preferences.
pub(crate) trait Arith {
    type S: Clone + PartialEq;
    fn from_bigint(&self, v: &BigInt) -> Option<Self::S>;
    fn is_abs_one(&self, v: &Self::S) -> bool;
    fn weight(&self, v: &Self::S) -> u32;
    /// Returns `row` combined against `pivot_row` so that column `col`
    /// cancels; `None` on arithmetic overflow.  With `normalize` the result
    /// may be rescaled by its content (not unimodular).
    fn eliminate_row(
        &self,
        pivot_row: &[(u32, Self::S)],
        pivot_val: &Self::S,
        row: &[(u32, Self::S)],
        row_val: &Self::S,
        col: u32,
        normalize: bool,
    ) -> Option<Vec<(u32, Self::S)>>;
}

pub(crate) struct Exact<T: ExactInt>(std::marker::PhantomData<T>);

impl<T: ExactInt> Exact<T> {
    pub(crate) fn new() -> Self {
        Exact(std::marker::PhantomData)
    }
}

impl<T: ExactInt> Arith for Exact<T> {
    type S = T;

    fn from_bigint(&self, v: &BigInt) -> Option<T> {
        T::from_bigint(v)
    }

    fn is_abs_one(&self, v: &T) -> bool {
        v.is_abs_one()
    }

    fn weight(&self, v: &T) -> u32 {
        v.bits()
    }

    fn eliminate_row(
        &self,
        pivot_row: &[(u32, T)],
        pivot_val: &T,
        row: &[(u32, T)],
        row_val: &T,
        col: u32,
        normalize: bool,
    ) -> Option<Vec<(u32, T)>> {
        // out = pivot_val * row - row_val * pivot_row, merged by column.
        let mut out: Vec<(u32, T)> = Vec::with_capacity(row.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot_row.len() {
            let ci = row.get(i).map(|e| e.0).unwrap_or(u32::MAX);
            let cj = pivot_row.get(j).map(|e| e.0).unwrap_or(u32::MAX);
            let c = ci.min(cj);
            let v = match (ci == c, cj == c) {
                (true, true) => {
                    let a = pivot_val.checked_mul(&row[i].1)?;
                    let b = row_val.checked_mul(&pivot_row[j].1)?;
                    i += 1;
                    j += 1;
                    a.checked_sub(&b)?
                }
                (true, false) => {
                    let a = pivot_val.checked_mul(&row[i].1)?;
                    i += 1;
                    a
                }
                _ => {
                    let b = row_val.checked_mul(&pivot_row[j].1)?;
                    j += 1;
                    b.checked_neg()?
                }
            };
            if c != col && !v.is_zero() {
                out.push((c, v));
            }
        }
        if normalize && !out.is_empty() {
            let mut g = out[0].1.gcd_abs(&out[0].1);
            for (_, v) in &out[1..] {
                if g.is_abs_one() {
                    break;
                }
                g = g.gcd_abs(v);
            }
            if !g.is_abs_one() {
                for (_, v) in &mut out {
                    *v = v.exact_div(&g);
                }
            }
        }
        Some(out)
    }
}

pub(crate) struct ModP {
    p: u64,
}

impl ModP {
    pub(crate) fn new(p: u64) -> Self {
        ModP { p }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

impl Arith for ModP {
    type S = u64;

    fn from_bigint(&self, v: &BigInt) -> Option<u64> {
        // Matrix entries in a prime field are already canonical residues.
        v.to_u64().filter(|&r| r < self.p)
    }

    fn is_abs_one(&self, v: &u64) -> bool {
        *v == 1 || *v == self.p - 1
    }

    fn weight(&self, _v: &u64) -> u32 {
        0
    }

    fn eliminate_row(
        &self,
        pivot_row: &[(u32, u64)],
        pivot_val: &u64,
        row: &[(u32, u64)],
        row_val: &u64,
        col: u32,
        _normalize: bool,
    ) -> Option<Vec<(u32, u64)>> {
        // out = row - (row_val / pivot_val) * pivot_row.
        let factor = self.mul(*row_val, invmod(*pivot_val, self.p));
        let mut out: Vec<(u32, u64)> = Vec::with_capacity(row.len() + pivot_row.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot_row.len() {
            let ci = row.get(i).map(|e| e.0).unwrap_or(u32::MAX);
            let cj = pivot_row.get(j).map(|e| e.0).unwrap_or(u32::MAX);
            let c = ci.min(cj);
            let mut v = if ci == c { row[i].1 } else { 0 };
            if cj == c {
                v = (v + self.p - self.mul(factor, pivot_row[j].1)) % self.p;
            }
            if ci == c {
                i += 1;
            }
            if cj == c {
                j += 1;
            }
            if c != col && v != 0 {
                out.push((c, v));
            }
        }
        Some(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum ElimMode {
    /// Any nonzero pivot, content removal allowed: computes rank.
    Rank,
    /// Pivots of absolute value one only, unimodular operations: peels off
    /// invariant factors equal to 1 and stops when no unit entry remains.
    UnitPivots,
}

pub(crate) struct ElimOutcome<S> {
    pub pivots: usize,
    /// Rows never used as pivots (pivot columns cleared), original column
    /// ids, empty rows included.
    pub live_rows: Vec<Vec<(u32, S)>>,
}

pub(crate) fn sparse_eliminate<A: Arith>(
    arith: &A,
    init_rows: Vec<Vec<(u32, A::S)>>,
    ncols: usize,
    mode: ElimMode,
) -> Option<ElimOutcome<A::S>> {
    let nrows = init_rows.len();
    let mut rows = init_rows;
    let mut live = vec![true; nrows];
    let mut col_count = vec![0u32; ncols];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_count[c as usize] += 1;
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols)
        .filter(|&c| col_count[c] > 0)
        .map(|c| Reverse((col_count[c], c as u32)))
        .collect();
    let mut set_aside: Vec<(u32, u32)> = Vec::new();
    let mut pivots = 0usize;

    loop {
        // Choose a column and a pivot row in it.
        let mut chosen: Option<(u32, Vec<(u32, A::S)>, u32)> = None;
        while let Some(Reverse((cnt, c))) = heap.pop() {
            if cnt == 0 || col_count[c as usize] != cnt {
                continue; // stale entry
            }
            // Validate the candidate list for this column.
            let mut ids = std::mem::take(&mut col_rows[c as usize]);
            ids.sort_unstable();
            ids.dedup();
            let mut cands: Vec<(u32, A::S)> = Vec::with_capacity(ids.len());
            let mut valid_ids = Vec::with_capacity(ids.len());
            for r in ids {
                if !live[r as usize] {
                    continue;
                }
                if let Ok(k) = rows[r as usize].binary_search_by_key(&c, |e| e.0) {
                    cands.push((r, rows[r as usize][k].1.clone()));
                    valid_ids.push(r);
                }
            }
            col_rows[c as usize] = valid_ids;
            debug_assert_eq!(cands.len() as u32, cnt);
            let pick = match mode {
                ElimMode::Rank => cands
                    .iter()
                    .min_by_key(|(r, v)| (arith.weight(v), rows[*r as usize].len(), *r))
                    .map(|(r, _)| *r),
                ElimMode::UnitPivots => cands
                    .iter()
                    .filter(|(_, v)| arith.is_abs_one(v))
                    .min_by_key(|(r, _)| (rows[*r as usize].len(), *r))
                    .map(|(r, _)| *r),
            };
            match pick {
                Some(r) => {
                    chosen = Some((c, cands, r));
                    break;
                }
                None => {
                    // No usable pivot here for now; revisit after the next
                    // successful pivot changes something.
                    set_aside.push((cnt, c));
                }
            }
        }
        let Some((c, cands, piv)) = chosen else {
            break;
        };
        let pivot_row = rows[piv as usize].clone();
        let k = pivot_row
            .binary_search_by_key(&c, |e| e.0)
            .expect("pivot entry present");
        let pivot_val = pivot_row[k].1.clone();
        for (r, rv) in cands {
            if r == piv {
                continue;
            }
            let new_row = arith.eliminate_row(
                &pivot_row,
                &pivot_val,
                &rows[r as usize],
                &rv,
                c,
                mode == ElimMode::Rank,
            )?;
            // Bookkeeping: diff the old and new support of the row.
            let old_row = std::mem::replace(&mut rows[r as usize], new_row);
            let (mut i, mut j) = (0, 0);
            let new_row = &rows[r as usize];
            while i < old_row.len() || j < new_row.len() {
                let ci = old_row.get(i).map(|e| e.0).unwrap_or(u32::MAX);
                let cj = new_row.get(j).map(|e| e.0).unwrap_or(u32::MAX);
                if ci < cj {
                    col_count[ci as usize] -= 1;
                    if col_count[ci as usize] > 0 {
                        heap.push(Reverse((col_count[ci as usize], ci)));
                    }
                    i += 1;
                } else if cj < ci {
                    col_count[cj as usize] += 1;
                    col_rows[cj as usize].push(r);
                    heap.push(Reverse((col_count[cj as usize], cj)));
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
        }
        // Retire the pivot row.
        live[piv as usize] = false;
        for &(cc, _) in &pivot_row {
            col_count[cc as usize] -= 1;
            if col_count[cc as usize] > 0 {
                heap.push(Reverse((col_count[cc as usize], cc)));
            }
        }
        rows[piv as usize] = Vec::new();
        pivots += 1;
        for x in set_aside.drain(..) {
            heap.push(Reverse(x));
        }
    }

    let live_rows = rows
        .into_iter()
        .zip(live)
        .filter_map(|(row, alive)| alive.then_some(row))
        .collect();
    Some(ElimOutcome { pivots, live_rows })
}

fn matrix_rows<A: Arith>(arith: &A, m: &SparseMatrix) -> Option<Vec<Vec<(u32, A::S)>>> {
    let mut rows: Vec<Vec<(u32, A::S)>> = vec![Vec::new(); m.rows()];
    for (r, c, v) in m.entries() {
        rows[*r as usize].push((*c, arith.from_bigint(v)?));
    }
    Some(rows)
}

fn rank_with<A: Arith>(arith: &A, m: &SparseMatrix) -> Option<usize> {
    let rows = matrix_rows(arith, m)?;
    let outcome = sparse_eliminate(arith, rows, m.cols(), ElimMode::Rank)?;
    debug_assert!(outcome.live_rows.iter().all(|r| r.is_empty()));
    Some(outcome.pivots)
}

/// Exact rank of a matrix over its coefficient ring.
///
/// Over the integers the rank is taken over the field of fractions, so
/// `Z` and `Q` agree.  The integer path runs on `i128` first and repeats
/// the whole elimination with big integers if any product overflows.
pub fn rank(m: &SparseMatrix) -> usize {
    match m.ring() {
        RingSpec::PrimeField(p) => {
            rank_with(&ModP::new(p), m).expect("modular elimination cannot overflow")
        }
        RingSpec::Integers | RingSpec::Rationals => rank_with(&Exact::<i128>::new(), m)
            .or_else(|| rank_with(&Exact::<BigInt>::new(), m))
            .expect("big integer elimination cannot overflow"),
    }
}

/// Unimodular unit-pivot reduction for Smith normal form preprocessing.
///
/// Returns the number of split-off invariant factors equal to 1 and the
/// remaining matrix, compacted to its nonzero rows and columns.
pub(crate) fn unit_pivot_reduce(m: &SparseMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let arith = Exact::<BigInt>::new();
    let rows = matrix_rows(&arith, m).expect("big integers cannot overflow");
    let outcome =
        sparse_eliminate(&arith, rows, m.cols(), ElimMode::UnitPivots).expect("no overflow");
    // Compact the remainder to the columns that still occur.
    let mut cols: Vec<u32> = outcome
        .live_rows
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let col_index = |c: u32| cols.binary_search(&c).expect("column present");
    let dense: Vec<Vec<BigInt>> = outcome
        .live_rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (c, v) in r {
                row[col_index(*c)] = v.clone();
            }
            row
        })
        .collect();
    (outcome.pivots, dense)
}

#[cfg(test)]
pub(crate) fn rank_forced_bigint(m: &SparseMatrix) -> usize {
    rank_with(&Exact::<BigInt>::new(), m).unwrap()
}
