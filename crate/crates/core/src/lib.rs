//! Elementary doctrines and the free-model adjunction, computed over finite sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`fincat`]: finite categories given by composition tables, functors and
//!   natural transformations.
//! * [`doctrine`]: primary and elementary doctrines behind the [`Doctrine`]
//!   trait, homomorphisms, 2-cells, the subobject doctrine over finite sets and
//!   the add-an-axiom construction.
//! * [`syntax`]: multi-sorted signatures, terms, Horn formulas, theories,
//!   theory morphisms and the lazily presented category of contexts.
//! * [`prover`]: bounded congruence closure with Horn saturation; the partial
//!   order oracle for fibers of Horn-formula doctrines.
//! * [`semantics`]: finite structures, interpretation, model enumeration and
//!   the correspondence between models and doctrine homomorphisms.
//! * [`kan`]: pointwise left Kan extensions into finite sets.
//! * [`qcompletion`]: the elementary quotient completion and the quotient
//!   functor back into subsets.
//! * [`adjoint`]: free models along theory morphisms, the bounded infimum
//!   relation on Kan classes, units and factorizations.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is on.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod adjoint;
pub mod bitset;
pub mod corpus;
pub mod doctrine;
pub mod fincat;
pub mod kan;
pub mod prover;
pub mod qcompletion;
pub mod report;
pub mod semantics;
pub mod syntax;

pub use bitset::BitSet;
pub use doctrine::Doctrine;
pub use report::{Finding, Severity, ValidationReport};
