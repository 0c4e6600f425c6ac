//! Exact computations in the calculus of twisted endomorphisms of bimodules.
//!
//! Everything here works on explicit representatives with arbitrary-precision
//! integers: finite rings presented by structure constants, bimodules and their
//! balanced tensor products, dualizable (finitely generated projective) 1-cells,
//! Frobenius and Verschiebung operators on twisted endomorphisms, Hochschild
//! shadows with bicategorical traces, and truncated big Witt vectors.
//!
//! The crate is `no_std` (it needs `alloc`); IO and file formats live in the
//! companion `endotrace` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod arith;
pub mod bimodule;
pub mod dualizable;
pub mod endo;
mod error;
pub mod lattice;
pub mod matrix;
pub mod shadow;
pub mod witt;

pub use algebra::{FinAlgebra, RingElement};
pub use arith::Int;
pub use bimodule::{Bimodule, BimoduleMap, TensorCache, TensorWitness};
pub use dualizable::{DualityData, ProjectivePresentation, RingMatrix};
pub use error::{Error, Result};
pub use lattice::{FinAbGroup, Presentation};
pub use matrix::IntMatrix;


pub use endo::{Carrier, EndoContext, ExactSequence, TupleMorphism, TwistedEndo, TwistedTuple};
pub use shadow::{Shadow, ShadowMap};
pub use witt::{GhostVector, WittVector};
