//! Young diagram combinatorics: bounded-row partitions, single-box moves,
//! Specht and Weyl dimensions, and symmetric group characters.

mod character;
mod dims;
mod partition;
mod table;

pub use character::{sn_character, CharacterTable};
pub use dims::{log_specht_dim, log_weyl_dim, specht_dim, weyl_dim, DimensionRecord};
pub use partition::{
    add_box_successors, box_row, enumerate_partitions, remove_box_predecessors, BoxRelation, Partition,
};
pub use table::{BlockDims, BranchingTable, NumericMode, DEFAULT_EXACT_THRESHOLD};
