//! Cochain pipelines for classifying spaces of finite groups.
//!
//! Three independent routes compute the cohomology of the classifying space
//! of a semidirect product built from an action of `H` on `G`:
//!
//! 1. [`bsemidirect_triple_complex`]: the twisted bisimplicial product of the
//!    two nerves, assembled as a triple complex (the third direction is zero
//!    for finite groups, where functions are the only differential forms) and
//!    totalized;
//! 2. [`bar_complex_of_product_group`]: the bar complex of the product group
//!    itself, a single nerve with no product structure in sight;
//! 3. [`weinstein_equivariant_complex`]: functions on `G^p` invariant under
//!    the diagonal `H`-action, with the restricted bar differential.  This
//!    route computes the same cohomology only when `|H|` is invertible in
//!    the coefficient ring ([`averaging_hypothesis`]), which is the finite
//!    shadow of compactness.
//!
//! [`verify_equivalence`] runs all three, times them, and compares Betti
//! tables (and torsion over the integers) degree by degree.
//!
//! Basis order everywhere is mixed-radix with the leftmost tuple entry most
//! significant, and the `G` block more significant than the `H` block; see
//! [`encode_tuple`] and [`encode_bituple`].  Every complex level is capped
//! at a configurable number of basis functions so that runaway degrees fail
//! fast with a clear message instead of exhausting memory.

use crate::group::{Elt, Group, GroupAction, SemidirectProduct};
use crate::homalg::double::{DoubleComplexMap, DoubleComplexSpec, TripleComplexSpec};
use crate::homalg::{
    simplicial_differential, totalize_triple, BettiTable, GradedComplex, HomalgError, MultiDegree,
    RingSpec, SparseMatrix,
};
use crate::nerve::{face_bis_horizontal, face_bis_vertical, face_ng, BiTuple};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

/// Default ceiling on the number of basis functions per complex level.
pub const DEFAULT_RESOURCE_CAP: usize = 50_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyingError {
    #[error(
        "level {at} needs {needed} basis functions, above the resource cap {cap}; raise the cap to proceed"
    )]
    ResourceCapExceeded {
        at: MultiDegree,
        needed: u128,
        cap: usize,
    },
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error(
        "restricted differential is not constant on the orbit of point {point} at level {level}; the action does not commute with the faces"
    )]
    NotEquivariant { level: usize, point: usize },
}

/// Mixed-radix index of a tuple, leftmost entry most significant.
pub fn encode_tuple(order: usize, tuple: &[Elt]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

/// Inverse of [`encode_tuple`] at a fixed level.
pub fn decode_tuple(order: usize, level: usize, mut index: usize) -> Vec<Elt> {
    let mut out = vec![0; level];
    for slot in out.iter_mut().rev() {
        *slot = index % order;
        index /= order;
    }
    out
}

/// Index of a point of the twisted product: the `G` block is more
/// significant than the `H` block.
pub fn encode_bituple(g_order: usize, h_order: usize, t: &BiTuple) -> usize {
    let h_span = h_order.pow(t.hpart.len() as u32);
    encode_tuple(g_order, &t.gpart) * h_span + encode_tuple(h_order, &t.hpart)
}

/// Inverse of [`encode_bituple`] at a fixed bidegree.
pub fn decode_bituple(
    g_order: usize,
    h_order: usize,
    p: usize,
    q: usize,
    index: usize,
) -> BiTuple {
    let h_span = h_order.pow(q as u32);
    BiTuple {
        gpart: decode_tuple(g_order, p, index / h_span),
        hpart: decode_tuple(h_order, q, index % h_span),
    }
}

/// Number of points of a product of powers, checked against the cap.
fn checked_dim(
    factors: &[(usize, usize)],
    cap: usize,
    at: MultiDegree,
) -> Result<usize, ClassifyingError> {
    let mut needed: u128 = 1;
    for &(base, exp) in factors {
        needed = needed.saturating_mul((base as u128).saturating_pow(exp as u32));
    }
    if needed > cap as u128 {
        return Err(ClassifyingError::ResourceCapExceeded { at, needed, cap });
    }
    Ok(needed as usize)
}

/// The bar complex of a finite group: functions on `G^p` for
/// `p <= max_degree + 1` with the alternating-sum face differential.
///
/// One extra level beyond `max_degree` is built so that cohomology through
/// `max_degree` is computable.
pub fn bg_complex(
    group: &Group,
    ring: RingSpec,
    max_degree: usize,
    cap: usize,
) -> Result<GradedComplex, ClassifyingError> {
    let n = group.order();
    let truncation = max_degree + 1;
    let dims: Vec<usize> = (0..=truncation)
        .map(|p| checked_dim(&[(n, p)], cap, MultiDegree(vec![p])))
        .collect::<Result<_, _>>()?;
    let mut d = Vec::with_capacity(truncation);
    for p in 0..truncation {
        let faces: Vec<Box<dyn Fn(usize) -> usize + '_>> = (0..=p + 1)
            .map(|i| {
                Box::new(move |y: usize| {
                    let t = decode_tuple(n, p + 1, y);
                    let img = face_ng(group, i, &t).expect("decoded tuples have valid faces");
                    encode_tuple(n, &img)
                }) as Box<dyn Fn(usize) -> usize + '_>
            })
            .collect();
        let refs: Vec<&dyn Fn(usize) -> usize> = faces.iter().map(|b| b.as_ref()).collect();
        d.push(simplicial_differential(ring, dims[p + 1], dims[p], &refs)?);
    }
    Ok(GradedComplex::new(ring, dims, d)?)
}

/// The bar complex of the underlying product group; the independent oracle
/// the twisted constructions are compared against.
pub fn bar_complex_of_product_group(
    sd: &SemidirectProduct,
    ring: RingSpec,
    max_degree: usize,
    cap: usize,
) -> Result<GradedComplex, ClassifyingError> {
    bg_complex(sd.product(), ring, max_degree, cap)
}

/// The double complex of functions on the twisted bisimplicial product:
/// block `(p, q)` is functions on `G^p x H^q`, the horizontal differential
/// is the alternating sum over `G`-side faces, and the vertical differential
/// is the alternating sum over `H`-side faces (the last one twisting the
/// `G` entries through the action) scaled by `(-1)^p`.
///
/// `truncation` is the top total degree stored, so cohomology of the
/// totalization is computable through `truncation - 1`.
pub fn bsemidirect_double_spec(
    sd: &SemidirectProduct,
    ring: RingSpec,
    truncation: usize,
    cap: usize,
) -> Result<DoubleComplexSpec, ClassifyingError> {
    let action = sd.action();
    let ng = sd.g().order();
    let nh = sd.h().order();
    let mut dims = BTreeMap::new();
    for n in 0..=truncation {
        for p in 0..=n {
            let q = n - p;
            dims.insert((p, q), checked_dim(&[(ng, p), (nh, q)], cap, (p, q).into())?);
        }
    }
    let mut d_horiz = BTreeMap::new();
    let mut d_vert = BTreeMap::new();
    for n in 0..truncation {
        for p in 0..=n {
            let q = n - p;
            let below = dims[&(p, q)];

            let faces: Vec<Box<dyn Fn(usize) -> usize + '_>> = (0..=p + 1)
                .map(|i| {
                    Box::new(move |y: usize| {
                        let t = decode_bituple(ng, nh, p + 1, q, y);
                        let img = face_bis_horizontal(action, i, &t)
                            .expect("decoded tuples have valid faces");
                        encode_bituple(ng, nh, &img)
                    }) as Box<dyn Fn(usize) -> usize + '_>
                })
                .collect();
            let refs: Vec<&dyn Fn(usize) -> usize> = faces.iter().map(|b| b.as_ref()).collect();
            d_horiz.insert(
                (p, q),
                simplicial_differential(ring, dims[&(p + 1, q)], below, &refs)?,
            );

            let faces: Vec<Box<dyn Fn(usize) -> usize + '_>> = (0..=q + 1)
                .map(|j| {
                    Box::new(move |y: usize| {
                        let t = decode_bituple(ng, nh, p, q + 1, y);
                        let img = face_bis_vertical(action, j, &t)
                            .expect("decoded tuples have valid faces");
                        encode_bituple(ng, nh, &img)
                    }) as Box<dyn Fn(usize) -> usize + '_>
                })
                .collect();
            let refs: Vec<&dyn Fn(usize) -> usize> = faces.iter().map(|b| b.as_ref()).collect();
            let vert = simplicial_differential(ring, dims[&(p, q + 1)], below, &refs)?;
            d_vert.insert((p, q), if p % 2 == 1 { vert.negated() } else { vert });
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

/// The same data as [`bsemidirect_double_spec`], embedded as a triple
/// complex concentrated in third degree zero: for finite groups the only
/// differential forms are functions, so the third (de Rham) differential is
/// identically zero and its `(-1)^(p+q)` sign is invisible.
pub fn bsemidirect_triple_spec(
    sd: &SemidirectProduct,
    ring: RingSpec,
    truncation: usize,
    cap: usize,
) -> Result<TripleComplexSpec, ClassifyingError> {
    let double = bsemidirect_double_spec(sd, ring, truncation, cap)?;
    let mut dims = BTreeMap::new();
    for n in 0..=truncation {
        for p in 0..=n {
            for q in 0..=(n - p) {
                let r = n - p - q;
                dims.insert((p, q, r), if r == 0 { double.dim(p, q) } else { 0 });
            }
        }
    }
    let mut d_first = BTreeMap::new();
    let mut d_second = BTreeMap::new();
    let mut d_third = BTreeMap::new();
    for n in 0..truncation {
        for p in 0..=n {
            for q in 0..=(n - p) {
                let r = n - p - q;
                if r == 0 {
                    let here = double.dim(p, q);
                    d_first.insert((p, q, 0), double.d_horiz[&(p, q)].clone());
                    d_second.insert((p, q, 0), double.d_vert[&(p, q)].clone());
                    d_third.insert((p, q, 0), SparseMatrix::zero(ring, 0, here));
                } else {
                    d_first.insert((p, q, r), SparseMatrix::zero(ring, 0, 0));
                    d_second.insert((p, q, r), SparseMatrix::zero(ring, 0, 0));
                    d_third.insert((p, q, r), SparseMatrix::zero(ring, 0, 0));
                }
            }
        }
    }
    Ok(TripleComplexSpec {
        ring,
        truncation,
        dims,
        d_first,
        d_second,
        d_third,
    })
}

/// Totalization of [`bsemidirect_triple_spec`], with levels through
/// `max_degree + 1` so cohomology through `max_degree` is computable.
pub fn bsemidirect_triple_complex(
    sd: &SemidirectProduct,
    ring: RingSpec,
    max_degree: usize,
    cap: usize,
) -> Result<GradedComplex, ClassifyingError> {
    let spec = bsemidirect_triple_spec(sd, ring, max_degree + 1, cap)?;
    Ok(totalize_triple(&spec)?)
}

/// Orbits of the diagonal action of the actor group on tuples over the
/// space group, as sorted point lists ordered by their minimum element.
#[derive(Clone, Debug)]
pub struct OrbitBasis {
    pub orbits: Vec<Vec<usize>>,
    /// Index of the orbit containing each point.
    pub orbit_of: Vec<usize>,
}

pub fn diagonal_orbits(
    action: &GroupAction,
    level: usize,
    cap: usize,
) -> Result<OrbitBasis, ClassifyingError> {
    let ng = action.space().order();
    let nh = action.actor().order();
    let total = checked_dim(&[(ng, level)], cap, MultiDegree(vec![level]))?;
    let mut orbit_of = vec![usize::MAX; total];
    let mut orbits = Vec::new();
    for x in 0..total {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let t = decode_tuple(ng, level, x);
        let mut members: Vec<usize> = (0..nh)
            .map(|h| {
                let img: Vec<Elt> = t.iter().map(|&g| action.apply(h, g)).collect();
                encode_tuple(ng, &img)
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        let id = orbits.len();
        for &m in &members {
            orbit_of[m] = id;
        }
        orbits.push(members);
    }
    Ok(OrbitBasis { orbits, orbit_of })
}

/// Image of the orbit-indicator evaluated at one point of the level above:
/// the map from below-orbit index to the alternating face count.
fn orbit_image_at(
    group: &Group,
    level_above: usize,
    point: usize,
    below: &OrbitBasis,
) -> BTreeMap<usize, i64> {
    let n = group.order();
    let t = decode_tuple(n, level_above, point);
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for i in 0..=level_above {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let img = face_ng(group, i, &t).expect("decoded tuples have valid faces");
        *acc.entry(below.orbit_of[encode_tuple(n, &img)]).or_insert(0) += sign;
    }
    acc.retain(|_, v| *v != 0);
    acc
}

/// The bar differential restricted to orbit indicators.  Every orbit member
/// is evaluated and must give the same row; a mismatch means the action is
/// not compatible with the faces and is reported as an error.
fn orbit_differential(
    group: &Group,
    ring: RingSpec,
    level_above: usize,
    above: &OrbitBasis,
    below: &OrbitBasis,
) -> Result<SparseMatrix, ClassifyingError> {
    let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
    for (row, orbit) in above.orbits.iter().enumerate() {
        let acc = orbit_image_at(group, level_above, orbit[0], below);
        for &other in &orbit[1..] {
            if orbit_image_at(group, level_above, other, below) != acc {
                return Err(ClassifyingError::NotEquivariant {
                    level: level_above,
                    point: other,
                });
            }
        }
        for (col, v) in acc {
            triplets.push((row, col, BigInt::from(v)));
        }
    }
    Ok(SparseMatrix::from_triplets(
        ring,
        above.orbits.len(),
        below.orbits.len(),
        triplets,
    )?)
}

/// Whether averaging over the acting group is possible: its order must be
/// invertible in the coefficient ring.
pub fn averaging_hypothesis(ring: RingSpec, actor_order: usize) -> bool {
    match ring {
        RingSpec::Rationals => true,
        RingSpec::Integers => actor_order == 1,
        RingSpec::PrimeField(p) => (actor_order as u128) % (p as u128) != 0,
    }
}

/// The complex of `H`-invariant functions on `G^p` under the diagonal
/// action, with the restricted bar differential, through level
/// `max_degree + 1`.
///
/// Construction never needs the averaging hypothesis; the comparison with
/// the other pipelines does.
pub fn weinstein_equivariant_complex(
    sd: &SemidirectProduct,
    ring: RingSpec,
    max_degree: usize,
    cap: usize,
) -> Result<GradedComplex, ClassifyingError> {
    let truncation = max_degree + 1;
    let group = sd.g();
    let bases: Vec<OrbitBasis> = (0..=truncation)
        .map(|p| diagonal_orbits(sd.action(), p, cap))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = bases.iter().map(|b| b.orbits.len()).collect();
    let mut d = Vec::with_capacity(truncation);
    for p in 0..truncation {
        d.push(orbit_differential(
            group,
            ring,
            p + 1,
            &bases[p + 1],
            &bases[p],
        )?);
    }
    Ok(GradedComplex::new(ring, dims, d)?)
}

/// The inclusion of the invariant complex into the twisted double complex,
/// as a map of double complexes: the source is the invariant complex
/// concentrated in vertical degree zero, the target is
/// [`bsemidirect_double_spec`], and block `(p, 0)` sends an orbit indicator
/// to the sum of its member delta functions.
///
/// The vertical chain-map law holds because invariant functions are killed
/// by the twisted-minus-plain pair of vertical faces; the validation inside
/// the column checker verifies this with exact arithmetic.
pub fn weinstein_invariants_inclusion(
    sd: &SemidirectProduct,
    ring: RingSpec,
    truncation: usize,
    cap: usize,
) -> Result<DoubleComplexMap, ClassifyingError> {
    let target = bsemidirect_double_spec(sd, ring, truncation, cap)?;
    let group = sd.g();
    let bases: Vec<OrbitBasis> = (0..=truncation)
        .map(|p| diagonal_orbits(sd.action(), p, cap))
        .collect::<Result<_, _>>()?;

    let mut dims = BTreeMap::new();
    for n in 0..=truncation {
        for p in 0..=n {
            let q = n - p;
            dims.insert((p, q), if q == 0 { bases[p].orbits.len() } else { 0 });
        }
    }
    let mut d_horiz = BTreeMap::new();
    let mut d_vert = BTreeMap::new();
    for n in 0..truncation {
        for p in 0..=n {
            let q = n - p;
            let here = dims[&(p, q)];
            let h = if q == 0 {
                orbit_differential(group, ring, p + 1, &bases[p + 1], &bases[p])?
            } else {
                SparseMatrix::zero(ring, 0, here)
            };
            d_horiz.insert((p, q), h);
            d_vert.insert((p, q), SparseMatrix::zero(ring, 0, here));
        }
    }
    let source = DoubleComplexSpec {
        ring,
        truncation,
        dims,
        d_horiz,
        d_vert,
    };

    let mut blocks = BTreeMap::new();
    for n in 0..=truncation {
        for p in 0..=n {
            let q = n - p;
            let block = if q == 0 {
                let triplets = bases[p].orbits.iter().enumerate().flat_map(|(o, orbit)| {
                    orbit.iter().map(move |&x| (x, o, BigInt::from(1)))
                });
                SparseMatrix::from_triplets(ring, target.dim(p, 0), bases[p].orbits.len(), triplets)?
            } else {
                SparseMatrix::zero(ring, target.dim(p, q), 0)
            };
            blocks.insert((p, q), block);
        }
    }
    Ok(DoubleComplexMap {
        source,
        target,
        blocks,
    })
}

/// Betti table of one pipeline, or the error that stopped it, with wall
/// time in seconds.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub id: &'static str,
    pub outcome: Result<BettiTable, String>,
    pub seconds: f64,
}

/// Outcome of [`verify_equivalence`].
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub group: String,
    pub ring: RingSpec,
    pub max_degree: usize,
    pub actor_order: usize,
    /// Whether the averaging hypothesis holds, making the invariant
    /// pipeline comparable.
    pub in_hypothesis: bool,
    pub pipelines: Vec<PipelineReport>,
    /// True when the twisted and product pipelines agree everywhere, and
    /// the invariant pipeline agrees too whenever the hypothesis holds.
    pub verdict: bool,
}

fn run_pipeline<F>(id: &'static str, max_degree: usize, f: F) -> PipelineReport
where
    F: FnOnce() -> Result<GradedComplex, ClassifyingError>,
{
    let start = Instant::now();
    let outcome = f()
        .and_then(|c| Ok(c.betti_table(max_degree)?))
        .map_err(|e| e.to_string());
    PipelineReport {
        id,
        outcome,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the three pipelines and compares their cohomology through
/// `max_degree`.  A pipeline failure is recorded in its report and fails
/// the verdict without stopping the others.  The invariant pipeline always
/// runs; it only participates in the verdict when the averaging hypothesis
/// holds.
pub fn verify_equivalence(
    sd: &SemidirectProduct,
    ring: RingSpec,
    max_degree: usize,
    cap: usize,
) -> EquivalenceReport {
    let twisted = run_pipeline("bsemidirect-total", max_degree, || {
        bsemidirect_triple_complex(sd, ring, max_degree, cap)
    });
    let product = run_pipeline("bar-of-product", max_degree, || {
        bar_complex_of_product_group(sd, ring, max_degree, cap)
    });
    let invariant = run_pipeline("weinstein-invariants", max_degree, || {
        weinstein_equivariant_complex(sd, ring, max_degree, cap)
    });
    let in_hypothesis = averaging_hypothesis(ring, sd.h().order());
    let mut verdict = match (&twisted.outcome, &product.outcome) {
        (Ok(a), Ok(b)) => a.same_groups(b),
        _ => false,
    };
    if in_hypothesis {
        verdict = verdict
            && match (&invariant.outcome, &twisted.outcome) {
                (Ok(a), Ok(b)) => a.same_groups(b),
                _ => false,
            };
    }
    EquivalenceReport {
        group: format!(
            "group of order {} = (order {}) x| (order {})",
            sd.product().order(),
            sd.g().order(),
            sd.h().order()
        ),
        ring,
        max_degree,
        actor_order: sd.h().order(),
        in_hypothesis,
        pipelines: vec![twisted, product, invariant],
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{conjugation_action, semidirect_product, GroupHom};

    fn inversion_semidirect(n: usize) -> SemidirectProduct {
        let g = Group::cyclic(n).unwrap();
        let h = Group::cyclic(2).unwrap();
        let images: Vec<Elt> = (0..n).map(|x| (n - x) % n).collect();
        let alpha = vec![(0..n).collect::<Vec<_>>(), images];
        let action = GroupAction::new(h.clone(), g.clone(), alpha).unwrap();
        semidirect_product(&g, &h, &action).unwrap()
    }

    #[test]
    fn tuple_codes_round_trip_and_order() {
        for index in 0..27 {
            let t = decode_tuple(3, 3, index);
            assert_eq!(encode_tuple(3, &t), index);
        }
        // Leftmost most significant.
        assert_eq!(encode_tuple(3, &[1, 0]), 3);
        assert_eq!(encode_tuple(3, &[0, 1]), 1);
        let t = BiTuple {
            gpart: vec![1],
            hpart: vec![0, 1],
        };
        // G block above the H block: 1 * 2^2 + 0 * 2 + 1.
        assert_eq!(encode_bituple(3, 2, &t), 5);
        assert_eq!(decode_bituple(3, 2, 1, 2, 5), t);
    }

    #[test]
    fn trivial_group_gives_a_point() {
        let g = Group::trivial();
        let c = bg_complex(&g, RingSpec::Integers, 3, DEFAULT_RESOURCE_CAP).unwrap();
        assert_eq!(
            c.betti_table(3).unwrap().betti_numbers(),
            vec![1, 0, 0, 0]
        );
    }

    #[test]
    fn cyclic_two_has_periodic_integral_cohomology() {
        let g = Group::cyclic(2).unwrap();
        let c = bg_complex(&g, RingSpec::Integers, 4, DEFAULT_RESOURCE_CAP).unwrap();
        let table = c.betti_table(4).unwrap();
        assert_eq!(table.betti_numbers(), vec![1, 0, 0, 0, 0]);
        let torsion: Vec<Vec<BigInt>> =
            table.entries.iter().map(|e| e.torsion.clone()).collect();
        assert_eq!(
            torsion,
            vec![
                vec![],
                vec![],
                vec![BigInt::from(2)],
                vec![],
                vec![BigInt::from(2)]
            ]
        );
        let c = bg_complex(&g, RingSpec::prime_field(2).unwrap(), 4, DEFAULT_RESOURCE_CAP)
            .unwrap();
        assert_eq!(
            c.betti_table(4).unwrap().betti_numbers(),
            vec![1, 1, 1, 1, 1]
        );
    }

    #[test]
    fn resource_cap_failure_names_the_level() {
        let g = Group::cyclic(2).unwrap();
        let err = bg_complex(&g, RingSpec::Rationals, 20, 50).unwrap_err();
        assert_eq!(
            err,
            ClassifyingError::ResourceCapExceeded {
                at: MultiDegree(vec![6]),
                needed: 64,
                cap: 50
            }
        );
    }

    #[test]
    fn trivial_actor_degenerates_to_the_base_bar_complex() {
        let g = Group::cyclic(3).unwrap();
        let h = Group::trivial();
        let action = GroupAction::trivial(h.clone(), g.clone());
        let sd = semidirect_product(&g, &h, &action).unwrap();
        for ring in [RingSpec::Rationals, RingSpec::prime_field(3).unwrap()] {
            let twisted = bsemidirect_triple_complex(&sd, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
            let plain = bg_complex(&g, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
            assert!(twisted
                .betti_table(3)
                .unwrap()
                .same_groups(&plain.betti_table(3).unwrap()));
        }
    }

    #[test]
    fn trivial_base_degenerates_to_the_actor_bar_complex() {
        let g = Group::trivial();
        let h = Group::cyclic(2).unwrap();
        let action = GroupAction::trivial(h.clone(), g.clone());
        let sd = semidirect_product(&g, &h, &action).unwrap();
        let ring = RingSpec::prime_field(2).unwrap();
        let twisted = bsemidirect_triple_complex(&sd, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
        let plain = bg_complex(&h, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
        assert!(twisted
            .betti_table(3)
            .unwrap()
            .same_groups(&plain.betti_table(3).unwrap()));
    }

    #[test]
    fn inversion_orbits_are_the_expected_partitions() {
        let sd = inversion_semidirect(3);
        let level1 = diagonal_orbits(sd.action(), 1, DEFAULT_RESOURCE_CAP).unwrap();
        assert_eq!(level1.orbits, vec![vec![0], vec![1, 2]]);
        let level2 = diagonal_orbits(sd.action(), 2, DEFAULT_RESOURCE_CAP).unwrap();
        // Pairs over Z/3 in mixed-radix order, negated entrywise.
        assert_eq!(
            level2.orbits,
            vec![vec![0], vec![1, 2], vec![3, 6], vec![4, 8], vec![5, 7]]
        );
        assert_eq!(level2.orbit_of[8], 3);
    }

    #[test]
    fn invariant_complex_with_trivial_actor_equals_the_bar_complex() {
        let g = Group::cyclic(3).unwrap();
        let h = Group::trivial();
        let action = GroupAction::trivial(h.clone(), g.clone());
        let sd = semidirect_product(&g, &h, &action).unwrap();
        let ring = RingSpec::Rationals;
        let invariant = weinstein_equivariant_complex(&sd, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
        let plain = bg_complex(&g, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
        assert_eq!(invariant.dims(), plain.dims());
        for p in 0..=3 {
            assert_eq!(invariant.differential(p).unwrap(), plain.differential(p).unwrap());
        }
    }

    #[test]
    fn out_of_hypothesis_construction_still_succeeds() {
        let sd = inversion_semidirect(3);
        let ring = RingSpec::prime_field(2).unwrap();
        assert!(!averaging_hypothesis(ring, sd.h().order()));
        weinstein_equivariant_complex(&sd, ring, 2, DEFAULT_RESOURCE_CAP).unwrap();
    }

    #[test]
    fn averaging_hypothesis_truth_table() {
        assert!(averaging_hypothesis(RingSpec::Rationals, 6));
        assert!(averaging_hypothesis(RingSpec::Integers, 1));
        assert!(!averaging_hypothesis(RingSpec::Integers, 2));
        assert!(averaging_hypothesis(RingSpec::prime_field(3).unwrap(), 2));
        assert!(!averaging_hypothesis(RingSpec::prime_field(2).unwrap(), 2));
    }

    #[test]
    fn conjugation_semidirect_verifies_over_a_prime_field() {
        // Z/3 x| Z/2 with inversion over F3: the motivating worked case.
        let sd = inversion_semidirect(3);
        let ring = RingSpec::prime_field(3).unwrap();
        let report = verify_equivalence(&sd, ring, 3, DEFAULT_RESOURCE_CAP);
        assert!(report.in_hypothesis);
        assert!(report.verdict);
        let betti = report.pipelines[0].outcome.as_ref().unwrap().betti_numbers();
        assert_eq!(betti, vec![1, 0, 0, 1]);
    }

    #[test]
    fn direct_product_with_trivial_action_verifies_over_integers() {
        let g = Group::cyclic(2).unwrap();
        let h = Group::trivial();
        let action = GroupAction::trivial(h.clone(), g.clone());
        let sd = semidirect_product(&g, &h, &action).unwrap();
        let report = verify_equivalence(&sd, RingSpec::Integers, 4, DEFAULT_RESOURCE_CAP);
        assert!(report.in_hypothesis);
        assert!(report.verdict);
        let table = report.pipelines[1].outcome.as_ref().unwrap();
        assert_eq!(table.entries[2].torsion, vec![BigInt::from(2)]);
        assert_eq!(table.entries[4].torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn pipeline_failures_are_contained() {
        let sd = inversion_semidirect(3);
        let report = verify_equivalence(&sd, RingSpec::Rationals, 4, 10);
        assert!(!report.verdict);
        for p in &report.pipelines {
            assert!(p.outcome.is_err());
        }
    }

    #[test]
    fn conjugation_action_orbits_split_rotations_from_reflections() {
        // Embed Z/3 as the rotations of S3 = Z/3 x| Z/2 and conjugate by
        // it: rotations commute so they are fixed, while the three
        // reflections form a single orbit.
        let sd = inversion_semidirect(3);
        let s3 = sd.product().clone();
        let z3 = Group::cyclic(3).unwrap();
        let embed = GroupHom::new(
            z3,
            s3.clone(),
            (0..3).map(|g| sd.pair_index(g, 0)).collect(),
        )
        .unwrap();
        let conj = conjugation_action(&s3, &embed).unwrap();
        let basis = diagonal_orbits(&conj, 1, DEFAULT_RESOURCE_CAP).unwrap();
        assert_eq!(
            basis.orbits,
            vec![vec![0], vec![1, 3, 5], vec![2], vec![4]]
        );
    }

    #[test]
    fn invariants_inclusion_is_a_valid_chain_map() {
        let sd = inversion_semidirect(3);
        let ring = RingSpec::prime_field(3).unwrap();
        let map = weinstein_invariants_inclusion(&sd, ring, 3, DEFAULT_RESOURCE_CAP).unwrap();
        map.validate().unwrap();
    }
}
