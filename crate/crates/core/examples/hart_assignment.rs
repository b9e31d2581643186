//! Hybrid addressing of a small perfect tree: linear addresses near the root,
//! Gray-coded positional ranks below the threshold level.
//!
//! Run with `cargo run --example hart_assignment`.

use pcmtree::addressing::{Addressing, Ratio, Scheme, SchemeConfig};
use pcmtree::avl::AvlTree;

fn main() {
    for ratio in [Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(1, 1)] {
        let config = SchemeConfig::new(Scheme::hart(ratio), 6).with_depth_capacity(4);
        let mut addressing = Addressing::new(config, 15).unwrap();
        let mut tree = AvlTree::new();
        for key in [8, 4, 12, 2, 6, 10, 14, 1, 3, 5, 7, 9, 11, 13, 15] {
            let report = tree.insert_observed(key, &mut pcmtree::avl::NoopObserver).unwrap();
            addressing.assign_address(report.node, &report.attach_path).unwrap();
        }
        let t = addressing.threshold().unwrap();
        println!("ratio {ratio}: H={}, linear through level {}", t.height, t.level);
        for (id, path) in tree.preorder() {
            let a = addressing.assignment(id).unwrap();
            println!(
                "  key {:>2} level {} {:<4} {:06b} ({:?})",
                tree.key(id),
                path.level(),
                path.to_string(),
                a.address,
                a.origin
            );
        }
    }
}
