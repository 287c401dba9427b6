//! Polyomino ideals and their homological invariants.
//!
//! The crate models a finite collection of unit cells as a toric ring, computes
//! multigraded Betti numbers through squarefree divisor complexes, and checks
//! combinatorial classifications of linearly related, linear, Gorenstein and
//! extremal Gorenstein ideals against those homological computations. The same
//! machinery covers join-meet ideals of distributive lattices via Hibi rings.

pub mod classification;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod polyomino;
pub mod resolution;
pub mod sweep;
pub mod toric;

pub use error::{Error, Result};
pub use linalg::FieldChoice;
pub use polyomino::{CellCollection, ShapeProfile, StackProfile, Symmetry};
