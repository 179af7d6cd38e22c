//! Exact cohomology of classifying spaces of finite semidirect products.
//!
//! The library models a finite group `G` acted on by a finite group `H`
//! through automorphisms, builds the simplicial nerves of `G`, `H`, and the
//! twisted bisimplicial product `NG ⋊ NH`, and turns them into explicit
//! cochain complexes over `Z`, `Q`, or a prime field.  Three independent
//! routes to `H^*(B(G ⋊ H))` are provided and can be cross-checked degree by
//! degree:
//!
//! * the total complex of the bisimplicial bar construction,
//! * the ordinary bar complex of the semidirect product group itself,
//! * an equivariant (invariant-cochain) model that is valid whenever the
//!   order of `H` is invertible in the coefficient ring.
//!
//! A separate module carries the translation-invariant de Rham model for
//! nerves of torus groups, where the same total-complex machinery runs on
//! genuinely differential-graded input.
//!
//! All linear algebra is exact: fraction-free elimination over the integers
//! and rationals, modular elimination over prime fields, and a Smith normal
//! form with recorded unimodular transforms for integral torsion.

pub mod classifying;
pub mod cli;
pub mod group;
pub mod homalg;
pub mod identities;
pub mod nerve;
pub mod spec_io;
pub mod torus;
