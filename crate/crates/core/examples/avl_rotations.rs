//! Inserts a few keys and prints every rotation the tree reports.
//!
//! Run with `cargo run --example avl_rotations`.

use pcmtree::avl::{AvlTree, NodeId, RotationEvent, TreeObserver, TreePath};

struct Printer;

impl TreeObserver for Printer {
    fn attached(&mut self, tree: &AvlTree, node: NodeId, path: &TreePath) {
        println!("  attach {} at {path}", tree.key(node));
    }

    fn rotated(&mut self, tree: &AvlTree, event: &RotationEvent) {
        println!(
            "  {:?} rotation ({:?} case, {:?}) at level {} around key {}",
            event.direction,
            event.case,
            event.step,
            event.pivot_level,
            tree.key(event.pivot)
        );
        for m in &event.moved {
            println!("    key {} moved {} -> {}", tree.key(m.node), m.old_path, m.new_path);
        }
    }
}

fn main() {
    let mut tree = AvlTree::new();
    for key in [10, 20, 30, 25, 28, 5] {
        println!("insert {key}");
        tree.insert_observed(key, &mut Printer).expect("keys are distinct");
    }
    tree.validate().expect("tree stays balanced");
    println!("height {}, in order {:?}", tree.height(), tree.in_order_keys());
    for (id, path) in tree.preorder() {
        println!("{:>4}  {path}", tree.key(id));
    }
}
