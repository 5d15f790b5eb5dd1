//! Construction and empirical validation of induced-Ramsey host graphs:
//! certified pseudorandom gadgets, blowups, coloring-cleaning pipelines,
//! induced-embedding algorithms, and exact brute-force oracles.

pub mod bigraph;
pub mod bitset;
pub mod blowup;
pub mod coloring;
pub mod combi;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod regularity;
pub mod rng;

pub use bigraph::BipartitePair;
pub use bitset::BitSet;
pub use blowup::{construct_blowup, is_blowup_of, verify_blowup, Blowup};
pub use coloring::{adversary_color, AdversaryStrategy, EdgeColoring};
pub use error::{Error, Result};
pub use graph::{is_induced_copy, Embedding, Graph};
pub use numeric::{Frac, LogMag, Reported};
pub use regularity::{
    check_density_condition, check_regularity_exact, pair_density, refute_regularity_sampled,
    Mode, RegularityParams, RegularityStatus, RegularityVerdict,
};
