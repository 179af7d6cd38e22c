//! Face operators for the two nerve models of a finite group and for the
//! twisted bisimplicial product used for semidirect products.
//!
//! Two simplicial models are used side by side:
//!
//! * `NG`, with level `q` given by `G^q` and the usual front-drop / merge /
//!   back-drop faces;
//! * `N̄G` (the bar model), with level `q` given by `G^(q+1)` and faces that
//!   delete one entry.
//!
//! [`gamma`] is the classical simplicial comparison `N̄G -> NG`,
//! `(g_1, ..., g_{q+1}) |-> (g_1 g_2^{-1}, ..., g_q g_{q+1}^{-1})`.
//!
//! For a group `H` acting on `G` by automorphisms, level `(p, q)` of the
//! twisted product is `G^p x H^q`.  Horizontal faces act on the `G` part
//! alone; vertical faces act on the `H` part except for the last one, which
//! also pushes the whole `G` part through the automorphism attached to the
//! last `H` entry.  [`gamma_semidirect`] and [`right_action`] relate this
//! object to the bar model of the semidirect product group.

use crate::group::{Elt, Group, GroupAction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NerveError {
    #[error("face index {index} out of range at level {level}")]
    FaceIndexOutOfRange { index: usize, level: usize },
    #[error("operation requires a nonempty tuple")]
    EmptyTuple,
    #[error("tuple entry {value} out of range for a group of order {order}")]
    EntryOutOfRange { value: usize, order: usize },
}

/// A point of the twisted bisimplicial product at bidegree
/// `(gpart.len(), hpart.len())`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiTuple {
    pub gpart: Vec<Elt>,
    pub hpart: Vec<Elt>,
}

fn check_entries(group: &Group, t: &[Elt]) -> Result<(), NerveError> {
    for &value in t {
        if value >= group.order() {
            return Err(NerveError::EntryOutOfRange {
                value,
                order: group.order(),
            });
        }
    }
    Ok(())
}

fn check_index(i: usize, level: usize) -> Result<(), NerveError> {
    if i > level {
        return Err(NerveError::FaceIndexOutOfRange { index: i, level });
    }
    Ok(())
}

/// Face `i` of `NG` at level `t.len()`: drop the first entry (`i = 0`),
/// multiply entries `i` and `i+1` (`0 < i < level`), or drop the last entry
/// (`i = level`).
pub fn face_ng(group: &Group, i: usize, t: &[Elt]) -> Result<Vec<Elt>, NerveError> {
    check_entries(group, t)?;
    let level = t.len();
    if level == 0 {
        return Err(NerveError::EmptyTuple);
    }
    check_index(i, level)?;
    let out = if i == 0 {
        t[1..].to_vec()
    } else if i == level {
        t[..level - 1].to_vec()
    } else {
        let mut v = Vec::with_capacity(level - 1);
        v.extend_from_slice(&t[..i - 1]);
        v.push(group.mul(t[i - 1], t[i]));
        v.extend_from_slice(&t[i + 1..]);
        v
    };
    Ok(out)
}

/// Face `i` of the bar model `N̄G` at level `t.len() - 1`: delete entry `i`.
pub fn face_ngbar(group: &Group, i: usize, t: &[Elt]) -> Result<Vec<Elt>, NerveError> {
    check_entries(group, t)?;
    if t.is_empty() {
        return Err(NerveError::EmptyTuple);
    }
    let level = t.len() - 1;
    check_index(i, level)?;
    let mut v = t.to_vec();
    v.remove(i);
    Ok(v)
}

/// The simplicial comparison `N̄G -> NG`:
/// `(g_1, ..., g_{q+1}) |-> (g_1 g_2^{-1}, ..., g_q g_{q+1}^{-1})`.
pub fn gamma(group: &Group, t: &[Elt]) -> Result<Vec<Elt>, NerveError> {
    check_entries(group, t)?;
    if t.is_empty() {
        return Err(NerveError::EmptyTuple);
    }
    Ok(t.windows(2)
        .map(|w| group.mul(w[0], group.inv(w[1])))
        .collect())
}

fn check_bituple(action: &GroupAction, t: &BiTuple) -> Result<(), NerveError> {
    check_entries(action.space(), &t.gpart)?;
    check_entries(action.actor(), &t.hpart)
}

/// Horizontal face `i` at bidegree `(p, q)`: the `NG` face on the `G` part.
pub fn face_bis_horizontal(
    action: &GroupAction,
    i: usize,
    t: &BiTuple,
) -> Result<BiTuple, NerveError> {
    check_bituple(action, t)?;
    Ok(BiTuple {
        gpart: face_ng(action.space(), i, &t.gpart)?,
        hpart: t.hpart.clone(),
    })
}

/// Vertical face `i` at bidegree `(p, q)`: the `NH` face on the `H` part for
/// `i < q`; for `i = q` the last `H` entry is dropped and its automorphism is
/// applied to every `G` entry.
pub fn face_bis_vertical(
    action: &GroupAction,
    i: usize,
    t: &BiTuple,
) -> Result<BiTuple, NerveError> {
    check_bituple(action, t)?;
    let q = t.hpart.len();
    if q == 0 {
        return Err(NerveError::EmptyTuple);
    }
    check_index(i, q)?;
    if i < q {
        Ok(BiTuple {
            gpart: t.gpart.clone(),
            hpart: face_ng(action.actor(), i, &t.hpart)?,
        })
    } else {
        let h_last = t.hpart[q - 1];
        Ok(BiTuple {
            gpart: t.gpart.iter().map(|&g| action.apply(h_last, g)).collect(),
            hpart: t.hpart[..q - 1].to_vec(),
        })
    }
}

/// The comparison from pairs of bar tuples into the twisted product:
/// `(ḡ, h̄) |-> (alpha_{h_last}(gamma(ḡ)), gamma(h̄))` where `h_last` is the
/// final entry of `h̄`.
///
/// Inputs of lengths `p + 1` and `q + 1` produce a point of bidegree
/// `(p, q)`.
pub fn gamma_semidirect(
    action: &GroupAction,
    gbar: &[Elt],
    hbar: &[Elt],
) -> Result<BiTuple, NerveError> {
    check_entries(action.space(), gbar)?;
    check_entries(action.actor(), hbar)?;
    if gbar.is_empty() || hbar.is_empty() {
        return Err(NerveError::EmptyTuple);
    }
    let h_last = hbar[hbar.len() - 1];
    let gpart = gamma(action.space(), gbar)?
        .into_iter()
        .map(|g| action.apply(h_last, g))
        .collect();
    let hpart = gamma(action.actor(), hbar)?;
    Ok(BiTuple { gpart, hpart })
}

/// The right action of the semidirect product on pairs of bar tuples:
/// `(ḡ, h̄) * (g, h) = (alpha_{h^{-1}}(ḡ g), h̄ h)` entrywise.
pub fn right_action(
    action: &GroupAction,
    gbar: &[Elt],
    hbar: &[Elt],
    g: Elt,
    h: Elt,
) -> Result<(Vec<Elt>, Vec<Elt>), NerveError> {
    check_entries(action.space(), gbar)?;
    check_entries(action.actor(), hbar)?;
    check_entries(action.space(), &[g])?;
    check_entries(action.actor(), &[h])?;
    let space = action.space();
    let actor = action.actor();
    let hinv = actor.inv(h);
    let new_g = gbar
        .iter()
        .map(|&gi| action.apply(hinv, space.mul(gi, g)))
        .collect();
    let new_h = hbar.iter().map(|&hi| actor.mul(hi, h)).collect();
    Ok((new_g, new_h))
}
