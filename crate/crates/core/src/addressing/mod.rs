//! Address-allocation schemes for tree nodes.
//!
//! Five schemes are supported: sequential (linear), uniformly random,
//! Gray-coded level-order position, Gray-coded DFAT rank, and the hybrid that
//! uses linear addresses down to a threshold level and DFAT-Gray below it.

mod dfat;
mod gray;
mod scheme;
mod space;
mod threshold;
mod word;

pub use dfat::{dfat_index, level_order_index, Alternation};
pub use gray::{binary_to_gray, gray_to_binary};
pub use scheme::{Addressing, Assignment, Origin, Placement, Region, Relabel, Scheme, SchemeConfig, SchemeKind};
pub use space::AddressSpace;
pub use threshold::{parse_ratio, threshold_from_ratio, tree_height_estimate, Ratio, Threshold};
pub use word::{null_word, AddressWord, MAX_WIDTH};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AddressError {
    #[error("pointer width {0} outside 1..={max}", max = MAX_WIDTH)]
    InvalidWidth(u32),
    #[error("value {value} does not fit in {width} bits")]
    OutOfRange { value: u64, width: u32 },
    #[error("width mismatch: {0} vs {1} bits")]
    WidthMismatch(u32, u32),
    #[error("path depth {depth} does not fit a {capacity}-level index")]
    DepthOverflow { depth: u32, capacity: u32 },
    #[error("address space of {width} bits is exhausted")]
    CapacityExhausted { width: u32 },
    #[error("address {0} is already occupied")]
    Occupied(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
