//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] returns the full decomposition `L * M * R = D` with
//! unimodular `L`, `R` and a nonnegative diagonal in a divisibility chain;
//! the identity is re-verified with exact arithmetic before returning.
//! [`invariant_factors`] returns only the nonzero diagonal entries and is
//! engineered for large sparse inputs: a unimodular unit-pivot sweep (see
//! [`super::elim`]) splits off the factors equal to 1 sparsely, and only the
//! small remaining core is handled densely.

use super::elim::unit_pivot_reduce;
use super::matrix::SparseMatrix;
use super::ring::RingSpec;
use super::HomalgError;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Decomposition `left * m * right = diag(diagonal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Diagonal of length `min(rows, cols)`: nonnegative, each entry
    /// dividing the next, zeros at the end.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `rows x rows` transform.
    pub left: SparseMatrix,
    /// Unimodular `cols x cols` transform.
    pub right: SparseMatrix,
}

/// Largest dimension accepted by the dense stage with transforms.
const DENSE_TRANSFORM_LIMIT: usize = 5_000;
/// Largest cell count accepted by the dense stage without transforms.
const DENSE_CELL_LIMIT: usize = 25_000_000;

struct Transforms {
    left: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
}

/// In-place Smith reduction of a dense matrix; returns the diagonal.
///
/// With `track`, every row operation is mirrored on `left` and every column
/// operation on `right`, so `left * original * right` stays equal to the
/// working matrix.
fn dense_snf(a: &mut [Vec<BigInt>], mut track: Option<&mut Transforms>) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map(|r| r.len()).unwrap_or(0);
    let n = nr.min(nc);
    let mut diag = vec![BigInt::zero(); n];
    for k in 0..n {
        'improve: loop {
            // Move a minimal-magnitude nonzero of the block to (k, k).
            let mut best: Option<(usize, usize)> = None;
            for i in k..nr {
                for j in k..nc {
                    if !a[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return diag; // block is zero; remaining diagonal stays zero
            };
            if bi != k {
                a.swap(k, bi);
                if let Some(t) = track.as_deref_mut() {
                    t.left.swap(k, bi);
                }
            }
            if bj != k {
                for row in a.iter_mut() {
                    row.swap(k, bj);
                }
                if let Some(t) = track.as_deref_mut() {
                    for row in t.right.iter_mut() {
                        row.swap(k, bj);
                    }
                }
            }
            // Clear column k below the pivot with truncated quotients.
            let mut dirty = false;
            for i in k + 1..nr {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = &a[i][k] / &a[k][k];
                if !q.is_zero() {
                    for j in k..nc {
                        let t = &a[k][j] * &q;
                        a[i][j] -= t;
                    }
                    if let Some(t) = track.as_deref_mut() {
                        for j in 0..nr {
                            let s = &t.left[k][j] * &q;
                            t.left[i][j] -= s;
                        }
                    }
                }
                if !a[i][k].is_zero() {
                    dirty = true; // remainder smaller than the pivot appeared
                }
            }
            if dirty {
                continue 'improve;
            }
            // Clear row k to the right of the pivot.
            for j in k + 1..nc {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = &a[k][j] / &a[k][k];
                if !q.is_zero() {
                    for i in 0..nr {
                        let t = &a[i][k] * &q;
                        a[i][j] -= t;
                    }
                    if let Some(t) = track.as_deref_mut() {
                        for i in 0..nc {
                            let s = &t.right[i][k] * &q;
                            t.right[i][j] -= s;
                        }
                    }
                }
                if !a[k][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'improve;
            }
            // Divisibility: the pivot must divide the whole remaining block.
            let mut offender = None;
            'scan: for i in k + 1..nr {
                for j in k + 1..nc {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                // Fold the offending row into row k and restart; the next
                // row-clearing pass strictly shrinks the pivot.
                for j in k..nc {
                    let t = a[i][j].clone();
                    a[k][j] += t;
                }
                if let Some(t) = track.as_deref_mut() {
                    for j in 0..nr {
                        let s = t.left[i][j].clone();
                        t.left[k][j] += s;
                    }
                }
                continue 'improve;
            }
            if a[k][k].is_negative() {
                for j in k..nc {
                    a[k][j] = -a[k][j].clone();
                }
                if let Some(t) = track.as_deref_mut() {
                    for j in 0..nr {
                        t.left[k][j] = -t.left[k][j].clone();
                    }
                }
            }
            diag[k] = a[k][k].clone();
            break;
        }
    }
    diag
}

fn require_integers(m: &SparseMatrix) -> Result<(), HomalgError> {
    if m.ring() != RingSpec::Integers {
        return Err(HomalgError::SnfRequiresIntegers(m.ring()));
    }
    Ok(())
}

fn dense_from(m: &SparseMatrix) -> Vec<Vec<BigInt>> {
    let mut a = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        a[*r as usize][*c as usize] = v.clone();
    }
    a
}

fn sparse_from_dense(ring: RingSpec, a: &[Vec<BigInt>]) -> SparseMatrix {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    SparseMatrix::from_triplets(
        ring,
        a.len(),
        cols,
        a.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(c, v)| (r, c, v.clone()))
        }),
    )
    .expect("dense matrix entries are in bounds")
}

/// Smith normal form with recorded unimodular transforms.
///
/// The returned triple satisfies `left * m * right = diag(diagonal)`; this
/// identity is recomputed with exact sparse arithmetic before returning and
/// a failure aborts, since it would mean corrupted bookkeeping.
pub fn smith_normal_form(m: &SparseMatrix) -> Result<SmithNormalForm, HomalgError> {
    require_integers(m)?;
    if m.rows() > DENSE_TRANSFORM_LIMIT || m.cols() > DENSE_TRANSFORM_LIMIT {
        return Err(HomalgError::SnfTooLarge(m.rows(), m.cols()));
    }
    let mut a = dense_from(m);
    let mut transforms = Transforms {
        left: identity_dense(m.rows()),
        right: identity_dense(m.cols()),
    };
    let diagonal = dense_snf(&mut a, Some(&mut transforms));
    let left = sparse_from_dense(RingSpec::Integers, &transforms.left);
    let right = sparse_from_dense(RingSpec::Integers, &transforms.right);
    let product = left
        .matmul(m)
        .and_then(|lm| lm.matmul(&right))
        .expect("transform shapes match by construction");
    let diag_matrix = SparseMatrix::from_triplets(
        RingSpec::Integers,
        m.rows(),
        m.cols(),
        diagonal
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, k, v.clone())),
    )
    .expect("diagonal fits the matrix");
    assert_eq!(
        product, diag_matrix,
        "Smith transform verification failed; this is a bug"
    );
    Ok(SmithNormalForm {
        diagonal,
        left,
        right,
    })
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    a
}

/// The nonzero invariant factors of an integer matrix, in a divisibility
/// chain.
///
/// Unimodular unit-pivot elimination splits off the leading 1s on the sparse
/// representation; the dense Smith stage then runs only on the small
/// remaining core.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<BigInt>, HomalgError> {
    require_integers(m)?;
    let (units, mut core) = unit_pivot_reduce(m);
    let core_rows = core.len();
    let core_cols = core.first().map(|r| r.len()).unwrap_or(0);
    if core_rows.saturating_mul(core_cols) > DENSE_CELL_LIMIT {
        return Err(HomalgError::SnfTooLarge(core_rows, core_cols));
    }
    let diag = dense_snf(&mut core, None);
    let mut factors = vec![BigInt::from(1); units];
    factors.extend(diag.into_iter().filter(|v| !v.is_zero()));
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::elim::rank;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from_dense_i64(ring: RingSpec, rows: &[Vec<i64>]) -> SparseMatrix {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        SparseMatrix::from_triplets(
            ring,
            rows.len(),
            cols,
            rows.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, &v)| (r, c, BigInt::from(v)))
            }),
        )
        .unwrap()
    }

    fn diag_i64(snf: &SmithNormalForm) -> Vec<i64> {
        snf.diagonal
            .iter()
            .map(|v| i64::try_from(v).unwrap())
            .collect()
    }

    /// Determinant by cofactor expansion; oracle-grade for tiny matrices.
    fn det_cofactor(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::from(1);
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for (j, v) in a[0].iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = v * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// Determinantal-divisor oracle: the k-th invariant factor is
    /// `d_k / d_{k-1}` where `d_k` is the gcd of all k x k minors.
    fn invariant_factors_oracle(rows: &[Vec<i64>]) -> Vec<BigInt> {
        let nr = rows.len();
        let nc = rows.first().map(|r| r.len()).unwrap_or(0);
        let n = nr.min(nc);
        let subsets = |m: usize, k: usize| -> Vec<Vec<usize>> {
            let mut out = vec![vec![]];
            for _ in 0..k {
                out = out
                    .into_iter()
                    .flat_map(|s: Vec<usize>| {
                        let lo = s.last().map(|&x| x + 1).unwrap_or(0);
                        (lo..m).map(move |x| {
                            let mut s2 = s.clone();
                            s2.push(x);
                            s2
                        })
                    })
                    .collect();
            }
            out
        };
        let mut divisors = vec![BigInt::from(1)]; // d_0
        for k in 1..=n {
            let mut g = BigInt::zero();
            for ri in subsets(nr, k) {
                for ci in subsets(nc, k) {
                    let sub: Vec<Vec<BigInt>> = ri
                        .iter()
                        .map(|&r| ci.iter().map(|&c| BigInt::from(rows[r][c])).collect())
                        .collect();
                    g = g.gcd(&det_cofactor(&sub).abs());
                }
            }
            divisors.push(g);
        }
        let mut factors = Vec::new();
        for k in 1..=n {
            if divisors[k].is_zero() {
                break;
            }
            factors.push(&divisors[k] / &divisors[k - 1]);
        }
        factors
    }

    #[test]
    fn frozen_diagonals() {
        let snf = smith_normal_form(&from_dense_i64(
            RingSpec::Integers,
            &[vec![6, 0], vec![0, 2]],
        ))
        .unwrap();
        assert_eq!(diag_i64(&snf), vec![2, 6]);
        let snf = smith_normal_form(&from_dense_i64(
            RingSpec::Integers,
            &[vec![4, 2], vec![2, 4]],
        ))
        .unwrap();
        assert_eq!(diag_i64(&snf), vec![2, 6]);
        let snf = smith_normal_form(&from_dense_i64(
            RingSpec::Integers,
            &[vec![1, 3], vec![2, 4]],
        ))
        .unwrap();
        assert_eq!(diag_i64(&snf), vec![1, 2]);
        let snf = smith_normal_form(&from_dense_i64(RingSpec::Integers, &[vec![2, 4, 6]]))
            .unwrap();
        assert_eq!(diag_i64(&snf), vec![2]);
        let snf =
            smith_normal_form(&SparseMatrix::zero(RingSpec::Integers, 2, 3)).unwrap();
        assert_eq!(diag_i64(&snf), vec![0, 0]);
        assert_eq!(
            invariant_factors(&SparseMatrix::zero(RingSpec::Integers, 2, 3)).unwrap(),
            Vec::<BigInt>::new()
        );
    }

    #[test]
    fn transforms_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..40 {
            let nr = rng.gen_range(1..=4);
            let nc = rng.gen_range(1..=4);
            let dense: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let m = from_dense_i64(RingSpec::Integers, &dense);
            let snf = smith_normal_form(&m).unwrap();
            let to_dense = |s: &SparseMatrix| -> Vec<Vec<BigInt>> {
                (0..s.rows())
                    .map(|r| (0..s.cols()).map(|c| s.get(r, c)).collect())
                    .collect()
            };
            assert_eq!(
                det_cofactor(&to_dense(&snf.left)).abs(),
                BigInt::from(1),
                "trial {trial}: left not unimodular for {dense:?}"
            );
            assert_eq!(
                det_cofactor(&to_dense(&snf.right)).abs(),
                BigInt::from(1),
                "trial {trial}: right not unimodular for {dense:?}"
            );
            // Divisibility chain among nonzero entries; zeros trail.
            let nz: Vec<&BigInt> = snf.diagonal.iter().filter(|v| !v.is_zero()).collect();
            for w in nz.windows(2) {
                assert!((w[1] % w[0]).is_zero(), "trial {trial}: chain broken");
            }
            let first_zero = snf.diagonal.iter().position(|v| v.is_zero());
            if let Some(z) = first_zero {
                assert!(snf.diagonal[z..].iter().all(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn factors_match_determinantal_divisor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for trial in 0..60 {
            let nr = rng.gen_range(1..=4);
            let nc = rng.gen_range(1..=4);
            let dense: Vec<Vec<i64>> = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-8..=8) })
                        .collect()
                })
                .collect();
            let m = from_dense_i64(RingSpec::Integers, &dense);
            let expected = invariant_factors_oracle(&dense);
            assert_eq!(
                invariant_factors(&m).unwrap(),
                expected,
                "trial {trial}: {dense:?}"
            );
            let snf = smith_normal_form(&m).unwrap();
            let nonzero: Vec<BigInt> = snf
                .diagonal
                .iter()
                .filter(|v| !v.is_zero())
                .cloned()
                .collect();
            assert_eq!(nonzero, expected, "trial {trial} full SNF: {dense:?}");
            // Number of nonzero factors equals the rank over Q.
            let q = from_dense_i64(RingSpec::Rationals, &dense);
            assert_eq!(expected.len(), rank(&q), "trial {trial}: {dense:?}");
        }
    }

    #[test]
    fn non_integer_rings_are_rejected() {
        let m = SparseMatrix::zero(RingSpec::Rationals, 2, 2);
        assert_eq!(
            smith_normal_form(&m).unwrap_err(),
            HomalgError::SnfRequiresIntegers(RingSpec::Rationals)
        );
        assert_eq!(
            invariant_factors(&m).unwrap_err(),
            HomalgError::SnfRequiresIntegers(RingSpec::Rationals)
        );
    }
}
