//! JSON descriptions of finite groups, actions, and semidirect products.
//!
//! A group spec is a JSON object tagged by `type`:
//!
//! ```json
//! { "type": "cyclic", "n": 6 }
//! { "type": "cayley", "table": [[0, 1], [1, 0]] }
//! { "type": "semidirect",
//!   "G": { "type": "cyclic", "n": 3 },
//!   "H": { "type": "cyclic", "n": 2 },
//!   "action": { "type": "images", "per_h": [[0, 1, 2], [0, 2, 1]] } }
//! ```
//!
//! An action spec is one of:
//!
//! * `{ "type": "trivial" }` — every acting element fixes the normal factor;
//! * `{ "type": "images", "per_h": [...] }` — one automorphism table per
//!   acting element, listed in element order;
//! * `{ "type": "conjugation", "embed": [...] }` — an injective homomorphism
//!   from the acting group into the normal factor, acting by conjugation.
//!
//! The `G` and `H` factors of a semidirect spec may themselves be any group
//! spec, including another semidirect product (which contributes its product
//! group).  Unknown fields are rejected, and every structural failure is
//! reported with the dotted path of the offending field.
//!
//! Groups are stored as dense multiplication tables (`order^2` entries), so
//! specs are rejected up front when any group they describe, including the
//! semidirect product itself, has order above [`MAX_SPEC_ORDER`].

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::group::{
    conjugation_action, semidirect_product, Group, GroupAction, GroupError, GroupHom,
    SemidirectProduct,
};

/// Largest group order a spec file may describe.
///
/// Every group is materialized as a dense `order^2` multiplication table, so
/// this bound keeps a short spec from demanding an enormous allocation.
pub const MAX_SPEC_ORDER: usize = 1024;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid group spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid group spec at `{field}`: {source}")]
    Field {
        field: String,
        #[source]
        source: GroupError,
    },
    #[error("group spec at `{at}` has order {order}, exceeding the supported maximum {max}")]
    OrderTooLarge { at: String, order: usize, max: usize },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum RawGroup {
    Cyclic(CyclicFields),
    Cayley(CayleyFields),
    Semidirect(SemidirectFields),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclicFields {
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CayleyFields {
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SemidirectFields {
    #[serde(rename = "G")]
    g: Box<RawGroup>,
    #[serde(rename = "H")]
    h: Box<RawGroup>,
    action: RawAction,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum RawAction {
    Trivial(TrivialFields),
    Images(ImagesFields),
    Conjugation(ConjugationFields),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrivialFields {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImagesFields {
    per_h: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConjugationFields {
    embed: Vec<usize>,
}

/// A group resolved from a spec file, remembering whether it came with a
/// semidirect decomposition.
#[derive(Clone, Debug)]
pub enum LoadedGroup {
    Single(Group),
    Semidirect(SemidirectProduct),
}

impl LoadedGroup {
    /// The underlying group: the product group for a semidirect spec.
    pub fn group(&self) -> &Group {
        match self {
            LoadedGroup::Single(g) => g,
            LoadedGroup::Semidirect(sd) => sd.product(),
        }
    }

    /// The semidirect decomposition, when the spec provided one.
    pub fn semidirect(&self) -> Option<&SemidirectProduct> {
        match self {
            LoadedGroup::Single(_) => None,
            LoadedGroup::Semidirect(sd) => Some(sd),
        }
    }

    /// A short human-readable description with the factor orders.
    pub fn describe(&self) -> String {
        match self {
            LoadedGroup::Single(g) => format!("group of order {}", g.order()),
            LoadedGroup::Semidirect(sd) => format!(
                "group of order {} = (order {}) x| (order {})",
                sd.product().order(),
                sd.g().order(),
                sd.h().order()
            ),
        }
    }
}

fn join(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

fn field_err(prefix: &str, name: &str, source: GroupError) -> SpecError {
    SpecError::Field {
        field: join(prefix, name),
        source,
    }
}

fn order_guard(order: usize, prefix: &str, name: &str) -> Result<(), SpecError> {
    if order > MAX_SPEC_ORDER {
        Err(SpecError::OrderTooLarge {
            at: if name.is_empty() && prefix.is_empty() {
                "(root)".to_string()
            } else if name.is_empty() {
                prefix.to_string()
            } else {
                join(prefix, name)
            },
            order,
            max: MAX_SPEC_ORDER,
        })
    } else {
        Ok(())
    }
}

fn resolve(raw: &RawGroup, prefix: &str) -> Result<LoadedGroup, SpecError> {
    match raw {
        RawGroup::Cyclic(fields) => {
            order_guard(fields.n, prefix, "n")?;
            Group::cyclic(fields.n)
                .map(LoadedGroup::Single)
                .map_err(|e| field_err(prefix, "n", e))
        }
        RawGroup::Cayley(fields) => {
            order_guard(fields.table.len(), prefix, "table")?;
            Group::from_cayley(&fields.table)
                .map(LoadedGroup::Single)
                .map_err(|e| field_err(prefix, "table", e))
        }
        RawGroup::Semidirect(fields) => {
            let g = resolve(&fields.g, &join(prefix, "G"))?.group().clone();
            let h = resolve(&fields.h, &join(prefix, "H"))?.group().clone();
            // Both factor orders are already bounded, so the product cannot
            // overflow; check it before any product-sized table is built.
            order_guard(g.order() * h.order(), prefix, "")?;
            let action = resolve_action(&fields.action, &g, &h, &join(prefix, "action"))?;
            semidirect_product(&g, &h, &action)
                .map(LoadedGroup::Semidirect)
                .map_err(|e| field_err(prefix, "action", e))
        }
    }
}

fn resolve_action(
    raw: &RawAction,
    g: &Group,
    h: &Group,
    prefix: &str,
) -> Result<GroupAction, SpecError> {
    match raw {
        RawAction::Trivial(TrivialFields {}) => Ok(GroupAction::trivial(h.clone(), g.clone())),
        RawAction::Images(fields) => GroupAction::new(h.clone(), g.clone(), fields.per_h.clone())
            .map_err(|e| field_err(prefix, "per_h", e)),
        RawAction::Conjugation(fields) => {
            let hom = GroupHom::new(h.clone(), g.clone(), fields.embed.clone())
                .map_err(|e| field_err(prefix, "embed", e))?;
            conjugation_action(g, &hom).map_err(|e| field_err(prefix, "embed", e))
        }
    }
}

/// Parses a group spec from JSON text.
pub fn parse_group_spec(text: &str) -> Result<LoadedGroup, SpecError> {
    let raw: RawGroup = serde_json::from_str(text)?;
    resolve(&raw, "")
}

/// Reads and parses a group spec file.
pub fn load_group_spec(path: &Path) -> Result<LoadedGroup, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_group_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_spec_builds_the_cyclic_group() {
        let loaded = parse_group_spec(r#"{ "type": "cyclic", "n": 6 }"#).unwrap();
        assert_eq!(loaded.group().order(), 6);
        assert!(loaded.semidirect().is_none());
        assert_eq!(loaded.describe(), "group of order 6");
    }

    #[test]
    fn cayley_spec_builds_from_the_table() {
        let loaded = parse_group_spec(r#"{ "type": "cayley", "table": [[0, 1], [1, 0]] }"#).unwrap();
        assert_eq!(loaded.group().order(), 2);
        assert_eq!(loaded.group().mul(1, 1), 0);
    }

    #[test]
    fn semidirect_spec_with_inversion_is_nonabelian() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 3 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "images", "per_h": [[0, 1, 2], [0, 2, 1]] }
        }"#;
        let loaded = parse_group_spec(text).unwrap();
        assert_eq!(loaded.group().order(), 6);
        assert!(!loaded.group().is_abelian());
        let sd = loaded.semidirect().unwrap();
        assert_eq!((sd.g().order(), sd.h().order()), (3, 2));
        assert_eq!(loaded.describe(), "group of order 6 = (order 3) x| (order 2)");
    }

    #[test]
    fn trivial_action_spec_builds_the_direct_product() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 2 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "trivial" }
        }"#;
        let loaded = parse_group_spec(text).unwrap();
        assert!(loaded.group().is_abelian());
        assert!(loaded.semidirect().unwrap().action().is_trivial());
    }

    #[test]
    fn conjugation_spec_acts_through_an_embedded_subgroup() {
        // The inner factor is S3 built as a nested semidirect spec; the outer
        // Z/2 embeds onto a transposition and acts by conjugation.
        let text = r#"{
            "type": "semidirect",
            "G": {
                "type": "semidirect",
                "G": { "type": "cyclic", "n": 3 },
                "H": { "type": "cyclic", "n": 2 },
                "action": { "type": "images", "per_h": [[0, 1, 2], [0, 2, 1]] }
            },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "conjugation", "embed": [0, 1] }
        }"#;
        let loaded = parse_group_spec(text).unwrap();
        assert_eq!(loaded.group().order(), 12);
        let sd = loaded.semidirect().unwrap();
        // Conjugation by the transposition inverts the rotations 2 and 4.
        assert_eq!(sd.action().apply(1, 2), 4);
        assert_eq!(sd.action().apply(1, 4), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse_group_spec(r#"{ "type": "cyclic", "n": 3, "x": 1 }"#).unwrap_err();
        assert!(matches!(err, SpecError::Json(_)));
        assert!(err.to_string().contains("unknown field `x`"), "{err}");
    }

    #[test]
    fn extra_fields_on_a_trivial_action_are_rejected() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 2 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "trivial", "junk": 0 }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        assert!(err.to_string().contains("unknown field `junk`"), "{err}");
    }

    #[test]
    fn missing_fields_and_unknown_tags_are_pointed_at() {
        let err = parse_group_spec(r#"{ "type": "cyclic" }"#).unwrap_err();
        assert!(err.to_string().contains("missing field `n`"), "{err}");
        let err = parse_group_spec(r#"{ "type": "dihedral", "n": 4 }"#).unwrap_err();
        assert!(err.to_string().contains("unknown variant `dihedral`"), "{err}");
    }

    #[test]
    fn bad_automorphism_table_names_the_acting_element() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 3 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "images", "per_h": [[0, 1, 2], [0, 0, 1]] }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        match &err {
            SpecError::Field { field, source } => {
                assert_eq!(field, "action.per_h");
                assert!(matches!(source, GroupError::NotAutomorphism { h: 1, .. }));
            }
            other => panic!("expected a field error, got {other:?}"),
        }
        assert!(err.to_string().contains("acting element 1"), "{err}");
    }

    #[test]
    fn non_functorial_tables_are_rejected() {
        // Each table is an automorphism of Z/5, but doubling has order 4, so
        // assigning it to the generator of Z/2 is not a homomorphism.
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 5 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "images", "per_h": [[0, 1, 2, 3, 4], [0, 2, 4, 1, 3]] }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        match err {
            SpecError::Field { field, source } => {
                assert_eq!(field, "action.per_h");
                assert!(matches!(source, GroupError::NotFunctorial { .. }));
            }
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn non_injective_embeddings_are_rejected() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 3 },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "conjugation", "embed": [0, 0] }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        match err {
            SpecError::Field { field, source } => {
                assert_eq!(field, "action.embed");
                // [0, 0] is a valid homomorphism but not injective.
                assert!(matches!(source, GroupError::NotInjective { .. }));
            }
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn nested_field_paths_use_dotted_names() {
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cayley", "table": [[0, 1], [1, 1]] },
            "H": { "type": "cyclic", "n": 2 },
            "action": { "type": "trivial" }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        match err {
            SpecError::Field { field, .. } => assert_eq!(field, "G.table"),
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn missing_files_report_the_path() {
        let err = load_group_spec(Path::new("/nonexistent/group.json")).unwrap_err();
        assert!(matches!(err, SpecError::Io { .. }));
        assert!(err.to_string().contains("/nonexistent/group.json"), "{err}");
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let err = parse_group_spec(r#"{ "type": "cyclic", "n": 3 } extra"#).unwrap_err();
        assert!(matches!(err, SpecError::Json(_)));
    }

    #[test]
    fn oversized_orders_are_rejected_before_any_table_is_built() {
        // A short spec must not be able to demand an order^2 allocation.
        let err = parse_group_spec(r#"{ "type": "cyclic", "n": 4000000000 }"#).unwrap_err();
        match &err {
            SpecError::OrderTooLarge { at, order, max } => {
                assert_eq!(at, "n");
                assert_eq!(*order, 4_000_000_000);
                assert_eq!(*max, MAX_SPEC_ORDER);
            }
            other => panic!("expected an order bound error, got {other:?}"),
        }
        assert!(err.to_string().contains("maximum 1024"), "{err}");

        // The combined product order is bounded too, even when both factors
        // pass individually, and is reported against the enclosing object.
        let text = r#"{
            "type": "semidirect",
            "G": { "type": "cyclic", "n": 100 },
            "H": { "type": "cyclic", "n": 100 },
            "action": { "type": "trivial" }
        }"#;
        let err = parse_group_spec(text).unwrap_err();
        match err {
            SpecError::OrderTooLarge { at, order, .. } => {
                assert_eq!(at, "(root)");
                assert_eq!(order, 10_000);
            }
            other => panic!("expected an order bound error, got {other:?}"),
        }

        // The bound itself is inclusive.
        assert!(parse_group_spec(r#"{ "type": "cyclic", "n": 1024 }"#).is_ok());
    }
}
