//! Finite commutative rings `Z_{n_1} x ... x Z_{n_k}`, finite modules over
//! them, and exhaustive checking of prime and φ-prime submodules.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: residue-vector rings and their (per-factor principal) ideals.
//! * [`module`]: block-form modules, the submodule lattice, colon ideals,
//!   quotients, products, saturation and localization.
//! * [`phi`]: the φ-function family and the φ-prime predicates.
//! * [`theorems`]: exhaustive verifiers over families of contexts, and
//!   counterexample hunts.
//! * [`dsl`] and [`report`]: the text format for contexts and report rendering.

// `Submodule` caches its generators in a `OnceLock`; ordering and equality
// only read the member set.
#![allow(clippy::mutable_key_type)]

pub mod dsl;
pub mod error;
pub mod module;
pub mod phi;
pub mod report;
pub mod ring;
pub mod theorems;

pub use error::{Error, Result};
pub use module::{
    product_context, Localization, ModElem, ModuleCtx, MultSet, QuotientMap, Submodule,
};
pub use ring::{FiniteRing, Ideal, RingElem};
