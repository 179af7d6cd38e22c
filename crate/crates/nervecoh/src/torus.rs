//! Classifying-space pipelines for tori, exercising the differential-form
//! direction that finite groups collapse.
//!
//! On the nerve of the torus `T^n`, level `p` is the manifold `(T^n)^p`.
//! Restricting to translation-invariant forms (standard averaging over the
//! compact torus) makes each level finite dimensional: the invariant
//! `q`-forms on `(T^n)^p` are spanned by wedges of the `np` coordinate
//! one-forms, so the bidegree `(p, q)` block has dimension `C(np, q)`.
//! Invariant forms are closed, so the de Rham differential vanishes and the
//! only differential is the simplicial one, whose face pullbacks act on
//! one-form generators by the additive versions of the nerve face formulas.
//!
//! [`weinstein_torus_complex`] tensors that complex with polynomial
//! generators `u_1..u_n` of degree 2 (conjugation on an abelian group is
//! trivial, so invariants impose no condition and the contraction term
//! vanishes for the conjugation action).  [`cartan_free_circle`] is the
//! one-line Cartan model of the circle rotating itself freely.

use crate::homalg::double::DoubleComplexSpec;
use crate::homalg::{
    totalize_double, GradedComplex, HomalgError, MultiDegree, RingSpec, SparseMatrix,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error(
        "block {at} needs {needed} basis forms, above the resource cap {cap}; raise the cap to proceed"
    )]
    ResourceCapExceeded {
        at: MultiDegree,
        needed: u128,
        cap: usize,
    },
    #[error("face index {index} out of range at level {level}")]
    FaceIndexOutOfRange { index: usize, level: usize },
    #[error(transparent)]
    Homalg(#[from] HomalgError),
}

/// A formal rational combination of wedge monomials in one-form generators
/// times monomials in the even polynomial generators `u_1..u_n`.
///
/// Keys are `(one-form monomial, u exponents)`: the monomial is a strictly
/// increasing list of generator indices, the exponent vector has trailing
/// zeros trimmed.  One-form generators have degree 1, each `u_a` degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExteriorElement {
    terms: BTreeMap<(Vec<u32>, Vec<u32>), BigRational>,
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl ExteriorElement {
    pub fn zero() -> ExteriorElement {
        ExteriorElement::default()
    }

    /// The multiplicative unit: the empty wedge.
    pub fn one() -> ExteriorElement {
        let mut terms = BTreeMap::new();
        terms.insert((Vec::new(), Vec::new()), BigRational::one());
        ExteriorElement { terms }
    }

    pub fn one_form(generator: u32) -> ExteriorElement {
        let mut terms = BTreeMap::new();
        terms.insert((vec![generator], Vec::new()), BigRational::one());
        ExteriorElement { terms }
    }

    pub fn u_monomial(exps: &[u32]) -> ExteriorElement {
        let mut terms = BTreeMap::new();
        terms.insert((Vec::new(), trim(exps.to_vec())), BigRational::one());
        ExteriorElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &BigRational) -> ExteriorElement {
        if c.is_zero() {
            return ExteriorElement::zero();
        }
        ExteriorElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(BigRational::zero);
            *entry += v;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        ExteriorElement { terms }
    }

    /// Wedge product: Koszul sign on the one-form parts, commutative
    /// multiplication on the `u` parts.
    pub fn wedge(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out: BTreeMap<(Vec<u32>, Vec<u32>), BigRational> = BTreeMap::new();
        for ((m1, e1), c1) in &self.terms {
            for ((m2, e2), c2) in &other.terms {
                let Some((mono, sign)) = merge_with_sign(m1, m2) else {
                    continue;
                };
                let mut exps = vec![0; e1.len().max(e2.len())];
                for (k, &e) in e1.iter().enumerate() {
                    exps[k] += e;
                }
                for (k, &e) in e2.iter().enumerate() {
                    exps[k] += e;
                }
                let coeff = c1 * c2 * BigRational::from(BigInt::from(sign));
                *out.entry((mono, trim(exps)))
                    .or_insert_with(BigRational::zero) += coeff;
            }
        }
        out.retain(|_, v| !v.is_zero());
        ExteriorElement { terms: out }
    }

    /// Common total degree of all terms (`|monomial| + 2 * sum(exps)`), or
    /// `None` when the element is zero or inhomogeneous.
    pub fn total_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|(m, e)| {
            m.len() + 2 * e.iter().map(|&x| x as usize).sum::<usize>()
        });
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<u32>, Vec<u32>), &BigRational)> {
        self.terms.iter()
    }
}

/// Merges two strictly increasing monomials, returning the sorted union and
/// the Koszul sign, or `None` when they share a generator.
fn merge_with_sign(a: &[u32], b: &[u32]) -> Option<(Vec<u32>, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i64;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a entries.
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

/// Images of the one-form generators under the pullback of face `i` from
/// level `p` to level `p - 1` of the torus nerve of rank `n`.
///
/// Entry `j` lists the source generators (at level `p`, `np` of them) whose
/// sum is the image of target generator `j` (at level `p - 1`).  Generator
/// `c * n + a` is the `a`-th coordinate one-form on copy `c`.
pub fn torus_face_pullback(
    i: usize,
    p: usize,
    n: usize,
) -> Result<Vec<Vec<u32>>, TorusError> {
    if i > p || p == 0 {
        return Err(TorusError::FaceIndexOutOfRange { index: i, level: p });
    }
    let gen = |copy: usize, coord: usize| (copy * n + coord) as u32;
    let mut images = Vec::with_capacity(n * (p - 1));
    for copy in 0..p - 1 {
        for coord in 0..n {
            // Copies are 0-based here; the written formulas are 1-based.
            let image = if i == 0 {
                vec![gen(copy + 1, coord)]
            } else if i == p {
                vec![gen(copy, coord)]
            } else if copy + 1 < i {
                vec![gen(copy, coord)]
            } else if copy + 1 == i {
                vec![gen(copy, coord), gen(copy + 1, coord)]
            } else {
                vec![gen(copy + 1, coord)]
            };
            images.push(image);
        }
    }
    Ok(images)
}

/// Strictly increasing `q`-subsets of `0..gens` in lexicographic order.
fn subsets(gens: usize, q: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if q > gens {
        return out;
    }
    let mut current: Vec<u32> = (0..q as u32).collect();
    loop {
        out.push(current.clone());
        // Advance to the next combination.
        let mut k = q;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if current[k] < (gens - q + k) as u32 {
                current[k] += 1;
                for t in k + 1..q {
                    current[t] = current[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for t in 0..k.min(n - k) {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// Matrix of the pullback on `q`-forms induced by generator images, from
/// `C(target_gens, q)` wedge monomials to `C(source_gens, q)` of them.
fn exterior_pullback(
    ring: RingSpec,
    images: &[Vec<u32>],
    source_gens: usize,
    q: usize,
) -> Result<SparseMatrix, HomalgError> {
    let source_basis = subsets(source_gens, q);
    let target_basis = subsets(images.len(), q);
    let index: BTreeMap<&[u32], usize> = source_basis
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect();
    let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
    for (col, subset) in target_basis.iter().enumerate() {
        let mut element = ExteriorElement::one();
        for &k in subset {
            let image = images[k as usize]
                .iter()
                .fold(ExteriorElement::zero(), |acc, &s| {
                    acc.add(&ExteriorElement::one_form(s))
                });
            element = element.wedge(&image);
        }
        for ((mono, exps), coeff) in element.terms() {
            debug_assert!(exps.is_empty());
            debug_assert!(coeff.is_integer());
            triplets.push((index[mono.as_slice()], col, coeff.to_integer()));
        }
    }
    SparseMatrix::from_triplets(ring, source_basis.len(), target_basis.len(), triplets)
}

fn checked_block(
    n: usize,
    p: usize,
    q: usize,
    cap: usize,
) -> Result<usize, TorusError> {
    let needed = binomial(n * p, q);
    if needed > cap as u128 {
        return Err(TorusError::ResourceCapExceeded {
            at: (p, q).into(),
            needed,
            cap,
        });
    }
    Ok(needed as usize)
}

/// The double complex of translation-invariant forms on the torus nerve:
/// block `(p, q)` is the invariant `q`-forms on `(T^n)^p`, the horizontal
/// differential is the alternating sum of face pullbacks on wedge powers,
/// and the vertical (de Rham) differential is zero.  `truncation` is the
/// top stored total degree.
pub fn bt_double_spec(
    n: usize,
    ring: RingSpec,
    truncation: usize,
    cap: usize,
) -> Result<DoubleComplexSpec, TorusError> {
    let mut dims = BTreeMap::new();
    for total in 0..=truncation {
        for p in 0..=total {
            let q = total - p;
            dims.insert((p, q), checked_block(n, p, q, cap)?);
        }
    }
    let mut d_horiz = BTreeMap::new();
    let mut d_vert = BTreeMap::new();
    for total in 0..truncation {
        for p in 0..=total {
            let q = total - p;
            let rows = dims[&(p + 1, q)];
            let cols = dims[&(p, q)];
            let mut sum = SparseMatrix::zero(ring, rows, cols);
            for i in 0..=p + 1 {
                let images = torus_face_pullback(i, p + 1, n)?;
                let m = exterior_pullback(ring, &images, n * (p + 1), q)?;
                sum = sum.add(&if i % 2 == 1 { m.negated() } else { m })?;
            }
            d_horiz.insert((p, q), sum);
            d_vert.insert((p, q), SparseMatrix::zero(ring, dims[&(p, q + 1)], cols));
        }
    }
    Ok(DoubleComplexSpec {
        ring,
        truncation,
        dims,
        d_horiz,
        d_vert,
    })
}

/// Totalization of [`bt_double_spec`] over the rationals, with levels
/// through `max_degree + 1`.
pub fn bt_double_complex(n: usize, max_degree: usize, cap: usize) -> Result<GradedComplex, TorusError> {
    let spec = bt_double_spec(n, RingSpec::Rationals, max_degree + 1, cap)?;
    Ok(totalize_double(&spec)?)
}

/// Number of degree-`k` monomials in `n` commuting variables.
fn monomial_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        1
    } else if n == 0 {
        0
    } else {
        binomial(n + k - 1, k)
    }
}

/// The invariant-forms complex tensored with polynomial generators
/// `u_1..u_n` of degree 2; the differential acts on the form factor only.
/// Levels run through `max_degree + 1`.
///
/// Basis order at total degree `m`: ascending polynomial degree `k`, then
/// `u`-monomial index, then the totalized form basis at degree `m - 2k`.
pub fn weinstein_torus_complex(
    n: usize,
    max_degree: usize,
    cap: usize,
) -> Result<GradedComplex, TorusError> {
    let truncation = max_degree + 1;
    let base = totalize_double(&bt_double_spec(n, RingSpec::Rationals, truncation, cap)?)?;
    let mut dims = Vec::with_capacity(truncation + 1);
    for m in 0..=truncation {
        let mut total: u128 = 0;
        for k in 0..=m / 2 {
            total += monomial_count(n, k) * base.dim(m - 2 * k) as u128;
        }
        if total > cap as u128 {
            return Err(TorusError::ResourceCapExceeded {
                at: MultiDegree(vec![m]),
                needed: total,
                cap,
            });
        }
        dims.push(total as usize);
    }
    let mut d = Vec::with_capacity(truncation);
    for m in 0..truncation {
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        let mut col_off = 0;
        let row_off_at = |k: usize| {
            // Offset of the k-th polynomial stratum at level m + 1.
            let mut off = 0;
            for j in 0..k {
                off += monomial_count(n, j) as usize * base.dim(m + 1 - 2 * j);
            }
            off
        };
        for k in 0..=m / 2 {
            let copies = monomial_count(n, k) as usize;
            let block = base.differential(m - 2 * k).expect("within truncation");
            let row_base = row_off_at(k);
            for copy in 0..copies {
                let row_off = row_base + copy * block.rows();
                let col_local = col_off + copy * block.cols();
                for (r, c, v) in block.entries() {
                    triplets.push((
                        row_off + *r as usize,
                        col_local + *c as usize,
                        v.clone(),
                    ));
                }
            }
            col_off += copies * block.cols();
        }
        d.push(SparseMatrix::from_triplets(
            RingSpec::Rationals,
            dims[m + 1],
            dims[m],
            triplets,
        )?);
    }
    Ok(GradedComplex::new(RingSpec::Rationals, dims, d)?)
}

/// The Cartan model of the circle acting freely on itself: one generator
/// `u^k` in each even degree and `theta u^k` in each odd degree, with
/// `d(theta u^k) = -u^(k+1)` and `d(u^k) = 0`.
pub fn cartan_free_circle(max_degree: usize) -> Result<GradedComplex, TorusError> {
    let truncation = max_degree + 1;
    let ring = RingSpec::Rationals;
    let dims = vec![1usize; truncation + 1];
    let d = (0..truncation)
        .map(|m| {
            if m % 2 == 1 {
                SparseMatrix::from_triplets(ring, 1, 1, [(0usize, 0usize, BigInt::from(-1))])
            } else {
                Ok(SparseMatrix::zero(ring, 1, 1))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GradedComplex::new(ring, dims, d)?)
}
