//! Finite groups as validated multiplication tables, with homomorphisms,
//! automorphism actions, and semidirect products.
//!
//! Elements of a group of order `n` are the integers `0..n`.  Every public
//! constructor validates its input, so a `Group` value always satisfies the
//! group axioms: the table is checked to be a Latin square, to have a
//! two-sided identity, to be associative, and to have two-sided inverses, in
//! that order.  Associativity is checked exhaustively up to order
//! [`EXHAUSTIVE_ORDER_LIMIT`] and on [`ASSOC_SAMPLES`] seeded random triples
//! above that.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// A group element, always an index in `0..order`.
pub type Elt = usize;

/// Orders up to this bound get exhaustive associativity checking.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 64;

/// Number of sampled triples checked for associativity above the exhaustive
/// bound.
pub const ASSOC_SAMPLES: usize = 100_000;

/// Fixed seed for all sampled validation, so validation is deterministic.
const VALIDATION_SEED: u64 = 0x6e65_7276_6551;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("a group must have at least one element")]
    Empty,
    #[error("multiplication table is not square: row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("table entry {value} at row {row}, column {col} is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("row {index} of the multiplication table is not a permutation")]
    RowNotPermutation { index: usize },
    #[error("column {index} of the multiplication table is not a permutation")]
    ColumnNotPermutation { index: usize },
    #[error("the table has no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Elt, b: Elt, c: Elt },
    #[error("element {elt} has no two-sided inverse")]
    NoInverse { elt: Elt },
    #[error("map has length {len}, expected {expected}")]
    MapWrongLength { len: usize, expected: usize },
    #[error("map value {value} at {arg} is out of range for target order {order}")]
    MapValueOutOfRange {
        arg: Elt,
        value: usize,
        order: usize,
    },
    #[error("map is not bijective: {x} and {y} share the image {image}")]
    NotBijective { x: Elt, y: Elt, image: Elt },
    #[error("map is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotHomomorphism { x: Elt, y: Elt },
    #[error("embedding is not injective: {x} and {y} share the image {image}")]
    NotInjective { x: Elt, y: Elt, image: Elt },
    #[error("table assigned to acting element {h} is not an automorphism: {source}")]
    NotAutomorphism {
        h: Elt,
        #[source]
        source: Box<GroupError>,
    },
    #[error("the identity of the acting group must act as the identity map")]
    IdentityActsNontrivially,
    #[error("action is not functorial: alpha({h1}*{h2}) != alpha({h1}) o alpha({h2})")]
    NotFunctorial { h1: Elt, h2: Elt },
    #[error("action tables cover {got} acting elements, expected {expected}")]
    ActionWrongLength { got: usize, expected: usize },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
}

/// A finite group given by its full multiplication table.
///
/// The table is stored row-major: `mul[a * order + b]` is the product `a*b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    order: usize,
    mul: Vec<Elt>,
    identity: Elt,
    inv: Vec<Elt>,
}

impl Group {
    /// Builds and validates a group from an explicit Cayley table.
    ///
    /// `table[a][b]` is the product `a*b`.  Validation proceeds in the order
    /// Latin square, identity, associativity, inverses, and reports the first
    /// failure with a witness.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Group, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    order,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order,
                    });
                }
            }
        }
        let mut mul = Vec::with_capacity(order * order);
        for r in table {
            mul.extend_from_slice(r);
        }
        Self::from_flat(order, mul)
    }

    /// Same as [`Group::from_cayley`], but taking the row-major flat table.
    fn from_flat(order: usize, mul: Vec<Elt>) -> Result<Group, GroupError> {
        debug_assert_eq!(mul.len(), order * order);
        // Latin square: every row and every column is a permutation.
        let mut seen = vec![false; order];
        for row in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for col in 0..order {
                let v = mul[row * order + col];
                if seen[v] {
                    return Err(GroupError::RowNotPermutation { index: row });
                }
                seen[v] = true;
            }
        }
        for col in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for row in 0..order {
                let v = mul[row * order + col];
                if seen[v] {
                    return Err(GroupError::ColumnNotPermutation { index: col });
                }
                seen[v] = true;
            }
        }
        // Two-sided identity.
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or(GroupError::NoIdentity)?;
        // Associativity: exhaustive on small orders, seeded sampling above.
        let assoc = |a: Elt, b: Elt, c: Elt| {
            mul[mul[a * order + b] * order + c] == mul[a * order + mul[b * order + c]]
        };
        if order <= EXHAUSTIVE_ORDER_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(GroupError::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
            for _ in 0..ASSOC_SAMPLES {
                let a = rng.gen_range(0..order);
                let b = rng.gen_range(0..order);
                let c = rng.gen_range(0..order);
                if !assoc(a, b, c) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
        // Two-sided inverses.
        let mut inv = vec![0; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == identity && mul[b * order + a] == identity)
                .ok_or(GroupError::NoInverse { elt: a })?;
            inv[a] = b;
        }
        Ok(Group {
            order,
            mul,
            identity,
            inv,
        })
    }

    /// The cyclic group of order `n` with addition mod `n`.
    pub fn cyclic(n: usize) -> Result<Group, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push((a + b) % n);
            }
        }
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Ok(Group {
            order: n,
            mul,
            identity: 0,
            inv,
        })
    }

    /// The one-element group.
    pub fn trivial() -> Group {
        Group::cyclic(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elt {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.order
    }

    /// Multiplicative order of `a`.
    pub fn element_order(&self, a: Elt) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// True when the table is commutative.
    pub fn is_abelian(&self) -> bool {
        (0..self.order)
            .all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A validated homomorphism between two finite groups, stored as its value
/// table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Group,
    target: Group,
    map: Vec<Elt>,
}

impl GroupHom {
    /// Validates that `map` is a homomorphism `source -> target`.
    ///
    /// The homomorphism law is checked on every pair of source elements.
    pub fn new(source: Group, target: Group, map: Vec<Elt>) -> Result<GroupHom, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::MapWrongLength {
                len: map.len(),
                expected: source.order(),
            });
        }
        for (arg, &value) in map.iter().enumerate() {
            if value >= target.order() {
                return Err(GroupError::MapValueOutOfRange {
                    arg,
                    value,
                    order: target.order(),
                });
            }
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(GroupError::NotHomomorphism { x, y });
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            map,
        })
    }

    pub fn identity_hom(g: &Group) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: g.elements().collect(),
        }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: Elt) -> Elt {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

/// Builds the automorphism of `g` sending `x` to `images[x]`.
///
/// Bijectivity is checked before the homomorphism law, so a non-injective
/// table is reported as such even if it also fails the law.
pub fn automorphism_from_images(g: &Group, images: &[Elt]) -> Result<GroupHom, GroupError> {
    if images.len() != g.order() {
        return Err(GroupError::MapWrongLength {
            len: images.len(),
            expected: g.order(),
        });
    }
    for (arg, &value) in images.iter().enumerate() {
        if value >= g.order() {
            return Err(GroupError::MapValueOutOfRange {
                arg,
                value,
                order: g.order(),
            });
        }
    }
    let mut preimage = vec![usize::MAX; g.order()];
    for (x, &v) in images.iter().enumerate() {
        if preimage[v] != usize::MAX {
            return Err(GroupError::NotBijective {
                x: preimage[v],
                y: x,
                image: v,
            });
        }
        preimage[v] = x;
    }
    GroupHom::new(g.clone(), g.clone(), images.to_vec())
}

/// An action of a finite group `actor` on a finite group `space` by
/// automorphisms, stored as one value table per acting element.
///
/// Validated invariants: every table is an automorphism of `space`, the
/// identity acts as the identity map, and the assignment is functorial
/// (`alpha(h1*h2) = alpha(h1) o alpha(h2)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    actor: Group,
    space: Group,
    alpha: Vec<Vec<Elt>>,
}

impl GroupAction {
    pub fn new(actor: Group, space: Group, alpha: Vec<Vec<Elt>>) -> Result<GroupAction, GroupError> {
        if alpha.len() != actor.order() {
            return Err(GroupError::ActionWrongLength {
                got: alpha.len(),
                expected: actor.order(),
            });
        }
        for (h, table) in alpha.iter().enumerate() {
            automorphism_from_images(&space, table).map_err(|e| GroupError::NotAutomorphism {
                h,
                source: Box::new(e),
            })?;
        }
        let e = actor.identity();
        if alpha[e].iter().enumerate().any(|(g, &v)| v != g) {
            return Err(GroupError::IdentityActsNontrivially);
        }
        // Functoriality, exhaustive when cheap and sampled otherwise.
        let functorial = |h1: Elt, h2: Elt| {
            let composed = actor.mul(h1, h2);
            space
                .elements()
                .all(|g| alpha[composed][g] == alpha[h1][alpha[h2][g]])
        };
        let pairs = actor.order() * actor.order();
        if pairs.saturating_mul(space.order()) <= 1_000_000 {
            for h1 in actor.elements() {
                for h2 in actor.elements() {
                    if !functorial(h1, h2) {
                        return Err(GroupError::NotFunctorial { h1, h2 });
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED ^ 1);
            for _ in 0..ASSOC_SAMPLES {
                let h1 = rng.gen_range(0..actor.order());
                let h2 = rng.gen_range(0..actor.order());
                if !functorial(h1, h2) {
                    return Err(GroupError::NotFunctorial { h1, h2 });
                }
            }
        }
        Ok(GroupAction {
            actor,
            space,
            alpha,
        })
    }

    /// The action in which every element of `actor` fixes `space` pointwise.
    pub fn trivial(actor: Group, space: Group) -> GroupAction {
        let id: Vec<Elt> = space.elements().collect();
        let alpha = vec![id; actor.order()];
        GroupAction {
            actor,
            space,
            alpha,
        }
    }

    pub fn actor(&self) -> &Group {
        &self.actor
    }

    pub fn space(&self) -> &Group {
        &self.space
    }

    /// `alpha_h(g)`.
    #[inline]
    pub fn apply(&self, h: Elt, g: Elt) -> Elt {
        self.alpha[h][g]
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha
            .iter()
            .all(|t| t.iter().enumerate().all(|(g, &v)| v == g))
    }
}

/// Builds the conjugation action of `embed.source()` on `g` through an
/// injective homomorphism `embed` into `g`:
/// `alpha_h(x) = embed(h) * x * embed(h)^(-1)`.
pub fn conjugation_action(g: &Group, embed: &GroupHom) -> Result<GroupAction, GroupError> {
    if embed.target() != g {
        return Err(GroupError::GroupMismatch(
            "embedding target differs from the conjugated group".into(),
        ));
    }
    let mut seen = vec![usize::MAX; g.order()];
    for h in embed.source().elements() {
        let v = embed.apply(h);
        if seen[v] != usize::MAX {
            return Err(GroupError::NotInjective {
                x: seen[v],
                y: h,
                image: v,
            });
        }
        seen[v] = h;
    }
    let alpha = embed
        .source()
        .elements()
        .map(|h| {
            let a = embed.apply(h);
            let ainv = g.inv(a);
            g.elements().map(|x| g.mul(g.mul(a, x), ainv)).collect()
        })
        .collect();
    GroupAction::new(embed.source().clone(), g.clone(), alpha)
}

/// A semidirect product `G x| H` together with the data it was built from.
///
/// The underlying element set is `G x H`; the pair `(g, h)` is encoded as the
/// index `g * |H| + h`.  Multiplication is
/// `(g1, h1) * (g2, h2) = (g1 * alpha_{h1}(g2), h1 * h2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectProduct {
    g: Group,
    h: Group,
    action: GroupAction,
    product: Group,
}

/// Builds the semidirect product of `g` by `h` along `action`.
///
/// `action` must act on `g` with actor `h`; the resulting table is validated
/// like any other group table.
pub fn semidirect_product(
    g: &Group,
    h: &Group,
    action: &GroupAction,
) -> Result<SemidirectProduct, GroupError> {
    if action.space() != g {
        return Err(GroupError::GroupMismatch(
            "action space differs from the normal factor".into(),
        ));
    }
    if action.actor() != h {
        return Err(GroupError::GroupMismatch(
            "action actor differs from the acting factor".into(),
        ));
    }
    let (ng, nh) = (g.order(), h.order());
    let order = ng * nh;
    let mut mul = vec![0; order * order];
    for g1 in 0..ng {
        for h1 in 0..nh {
            let row = g1 * nh + h1;
            for g2 in 0..ng {
                let twisted = g.mul(g1, action.apply(h1, g2));
                for h2 in 0..nh {
                    mul[row * order + (g2 * nh + h2)] = twisted * nh + h.mul(h1, h2);
                }
            }
        }
    }
    let product = Group::from_flat(order, mul)?;
    Ok(SemidirectProduct {
        g: g.clone(),
        h: h.clone(),
        action: action.clone(),
        product,
    })
}

impl SemidirectProduct {
    pub fn g(&self) -> &Group {
        &self.g
    }

    pub fn h(&self) -> &Group {
        &self.h
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// The product group on the encoded pairs.
    pub fn product(&self) -> &Group {
        &self.product
    }

    /// Encodes the pair `(g, h)` as an element of the product.
    pub fn pair_index(&self, g: Elt, h: Elt) -> Elt {
        debug_assert!(g < self.g.order() && h < self.h.order());
        g * self.h.order() + h
    }

    /// Decodes an element of the product into its pair `(g, h)`.
    pub fn decompose(&self, k: Elt) -> (Elt, Elt) {
        (k / self.h.order(), k % self.h.order())
    }
}
