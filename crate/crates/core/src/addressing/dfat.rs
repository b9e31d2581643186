use serde::{Deserialize, Serialize};

use super::word::MAX_WIDTH;
use super::AddressError;
use crate::avl::{Side, TreePath};

/// Which child a depth-first alternating traversal visits first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Alternation {
    /// Left first at even depths (root depth 0), Right first at odd depths.
    #[default]
    LeftFirstAtEven,
    /// Mirror image: Right first at even depths.
    RightFirstAtEven,
}

impl Alternation {
    pub fn first_child(self, depth: u32) -> Side {
        let even = depth.is_multiple_of(2);
        match (self, even) {
            (Alternation::LeftFirstAtEven, true) | (Alternation::RightFirstAtEven, false) => Side::Left,
            _ => Side::Right,
        }
    }

    /// Preorder rank of `path` in the complete tree of `depth_capacity`
    /// levels, visiting children in alternating order.
    pub fn rank(self, path: &TreePath, depth_capacity: u32) -> Result<u64, AddressError> {
        if depth_capacity == 0 || depth_capacity > MAX_WIDTH {
            return Err(AddressError::InvalidArgument(format!(
                "depth capacity {depth_capacity} outside 1..={MAX_WIDTH}"
            )));
        }
        if path.depth() >= depth_capacity {
            return Err(AddressError::DepthOverflow {
                depth: path.depth(),
                capacity: depth_capacity,
            });
        }
        let mut rank = 0u64;
        for (depth, side) in path.steps().enumerate() {
            let depth = depth as u32;
            if side == self.first_child(depth) {
                rank += 1;
            } else {
                // skip the root of this step plus the whole first subtree,
                // which has (capacity - depth - 1) levels
                rank += 1u64 << (depth_capacity - depth - 1);
            }
        }
        Ok(rank)
    }
}

/// DFAT rank of `path` under the default alternation.
pub fn dfat_index(path: &TreePath, depth_capacity: u32) -> Result<u64, AddressError> {
    Alternation::default().rank(path, depth_capacity)
}

/// Zero-based level-order (heap) index of `path`.
pub fn level_order_index(path: &TreePath, depth_capacity: u32) -> Result<u64, AddressError> {
    let capacity = depth_capacity.min(MAX_WIDTH);
    if path.depth() >= capacity {
        return Err(AddressError::DepthOverflow {
            depth: path.depth(),
            capacity,
        });
    }
    let mut i = 1u64;
    for side in path.steps() {
        i = 2 * i + u64::from(side == Side::Right);
    }
    Ok(i - 1)
}
