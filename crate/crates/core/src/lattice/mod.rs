//! Finite posets, their distributive lattices of order ideals, and the
//! join-meet ideals of those lattices.

pub mod distributive;
pub mod poset;

pub use distributive::{
    classify_lattice, extremal_posets, is_chain_plus_point, join_irreducibles_of_order, lattice_class_from_h_vector, order_ideal_lattice, DistLattice,
    JoinMeetBinomial, LatticeClass,
};
pub use poset::{h_vector_of_poset, Poset, DEFAULT_POSET_CAP};
