//! Verification engine for monad-relative completion, closure, and density.
//!
//! The crate computes over finite data only:
//!
//! - [`fincat`]: finite categories, functors, natural transformations,
//!   monads, adjunctions, Kleisli categories and reflective subcategories.
//! - [`presheaf`]: the presheaf topos over a finite base (limits, images,
//!   exponentials, the subobject classifier and its sieves).
//! - [`factsys`]: orthogonality, (pre)factorization systems and the
//!   closure operators they induce.
//! - [`monadcore`]: dense/closed classes relative to a monad, the completion
//!   factorization of the unit, and the idempotent core.
//! - [`lttop`]: Lawvere-Tierney topologies, sheaves, the plus construction,
//!   the double-dualization monad and sheafification through the core.
//!
//! Everything is `no_std` with `alloc`; IO lives in the companion CLI crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod budget;
pub mod factsys;
pub mod fincat;
pub mod lttop;
pub mod monadcore;
pub mod presheaf;
pub mod report;

pub use budget::{Budget, BudgetExceeded};
