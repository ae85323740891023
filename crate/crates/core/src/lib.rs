//! Partitions of the cyclic group `Z_n` into arithmetic-progression blocks.
//!
//! * [`partition`] and [`ptype`]: elements, AP-blocks, AP-partitions and their types.
//! * [`counting`]: exact closed-form counts (Kaplansky numbers, cyclic multinomials).
//! * [`enumerate`]: brute-force enumerators used as independent oracles.
//! * [`separation`]: the separation bijection between partitions with
//!   different differences.
//! * [`verify`]: sweeps that check the counts and the bijection.
//! * [`format`]: canonical text and JSON encodings.

pub mod counting;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod partition;
pub mod ptype;
pub mod separation;
pub mod verify;

pub use counting::{cyclic_multinomial, generalized_kaplansky, kaplansky, msun_count, CountResult};
pub use enumerate::{
    enumerate_ap_partitions, enumerate_dissections, enumerate_spaced_subsets, subsets_to_partitions,
    EnumerationBudget, OnExceed,
};
pub use error::{Error, Result};
pub use format::BlockOrder;
pub use partition::{
    block_from_set, type_of, underlying_set, validate_partition, APBlock, APPartition, CycleElement,
    Violation,
};
pub use ptype::{check_condition, PartitionType};
pub use separation::{
    head_profiles, separate, separate_from, separate_traced, starting_points, verify_roundtrip,
    HeadProfile, RelativeOrder,
};
