//! Homological side: divisor complexes, Betti numbers, syzygy slices and
//! the resolution verdicts derived from them.

pub mod betti;
pub mod complex;
pub mod syzygy;
pub mod verdict;

pub use betti::{betti_table, betti_table_capped, BettiTable, MultigradedBetti, DEFAULT_BETTI_DEGREE};
pub use complex::{divisor_complex, divisor_complex_skeleton, SimplicialComplex};
pub use syzygy::{find_koszul_pair, koszul_pair_minimal, syzygy_slice, SyzygyEngine, SyzygySlice, Syzygies};
pub use verdict::{
    first_syzygies_in_degree, first_syzygies_in_degree_cached, is_linearly_related_oracle, resolution_verdict, verdict_from_h_vector, LinearlyRelatedOracle, LocalRankCache,
    ResolutionVerdict,
};
