//! Instrumented AVL tree.
//!
//! Nodes live in an arena and are addressed by [`NodeId`], which is stable for
//! the lifetime of the tree (ids are handed out in insertion order). Every
//! single rotation performed while rebalancing is reported as a
//! [`RotationEvent`] carrying the root paths of all nodes it moved, so the
//! addressing and accounting layers never have to diff whole trees.
//!
//! Levels are 1-based (the root sits on level 1); depths are 0-based.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Level of the root node.
pub const ROOT_LEVEL: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("key {0} is already present")]
    DuplicateKey(i64),
    #[error("key {0} is not present")]
    KeyNotFound(i64),
}

/// Stable identity of a node inside one [`AvlTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Sequence of Left/Right steps from the root to a position.
///
/// Packed into a `u128`, one bit per step (set = Right). Ordering is preorder
/// of the complete binary tree with Left visited before Right: a prefix sorts
/// before its extensions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TreePath {
    bits: u128,
    depth: u32,
}

impl TreePath {
    pub const MAX_DEPTH: u32 = 128;

    pub fn root() -> Self {
        TreePath::default()
    }

    pub fn from_steps(steps: &[Side]) -> Self {
        let mut path = TreePath::root();
        for &s in steps {
            path = path.child(s);
        }
        path
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Level of the position this path leads to (root = [`ROOT_LEVEL`]).
    pub fn level(&self) -> u32 {
        self.depth + ROOT_LEVEL
    }

    pub fn is_root(&self) -> bool {
        self.depth == 0
    }

    pub fn step(&self, i: u32) -> Side {
        assert!(i < self.depth, "step {i} out of range for depth {}", self.depth);
        if self.bits >> i & 1 == 1 {
            Side::Right
        } else {
            Side::Left
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = Side> + '_ {
        (0..self.depth).map(move |i| self.step(i))
    }

    pub fn child(&self, side: Side) -> TreePath {
        assert!(
            self.depth < Self::MAX_DEPTH,
            "tree path deeper than {}",
            Self::MAX_DEPTH
        );
        let bit = match side {
            Side::Left => 0,
            Side::Right => 1u128 << self.depth,
        };
        TreePath {
            bits: self.bits | bit,
            depth: self.depth + 1,
        }
    }

    /// Path with the first `depth` steps of `self`.
    pub fn prefix(&self, depth: u32) -> TreePath {
        assert!(depth <= self.depth);
        let mask = if depth == 128 { u128::MAX } else { (1u128 << depth) - 1 };
        TreePath {
            bits: self.bits & mask,
            depth,
        }
    }

    /// Concatenation `self ++ suffix`.
    pub fn join(&self, suffix: &TreePath) -> TreePath {
        assert!(self.depth + suffix.depth <= Self::MAX_DEPTH);
        TreePath {
            bits: self.bits | suffix.bits << self.depth,
            depth: self.depth + suffix.depth,
        }
    }
}

impl Ord for TreePath {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.depth.min(other.depth);
        let diff = (self.bits ^ other.bits)
            & if common == 128 {
                u128::MAX
            } else {
                (1u128 << common) - 1
            };
        if diff != 0 {
            let first = diff.trailing_zeros();
            return if self.bits >> first & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        self.depth.cmp(&other.depth)
    }
}

impl PartialOrd for TreePath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreePath({self})")
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return f.write_str("root");
        }
        for s in self.steps() {
            f.write_str(match s {
                Side::Left => "L",
                Side::Right => "R",
            })?;
        }
        Ok(())
    }
}

/// A stored child pointer: either the tree's root pointer or one child field
/// of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Root,
    Child(NodeId, Side),
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub key: i64,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    /// Height of the subtree rooted here; a leaf has height 1.
    pub height: u32,
}

impl TreeNode {
    pub fn child(&self, side: Side) -> Option<NodeId> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    fn child_mut(&mut self, side: Side) -> &mut Option<NodeId> {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }
}

/// Imbalance case that triggered a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationCase {
    LL,
    RR,
    LR,
    RL,
}

/// Direction of a single rotation. `Right` lifts the pivot's left child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationDirection {
    Left,
    Right,
}

/// Position of a single rotation inside its rebalancing step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationStep {
    Single,
    DoubleFirst,
    DoubleSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MovedNode {
    pub node: NodeId,
    pub old_path: TreePath,
    pub new_path: TreePath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkChange {
    pub slot: Slot,
    pub old: Option<NodeId>,
    pub new: Option<NodeId>,
}

/// One single rotation. Double rotations produce two events.
#[derive(Debug, Clone)]
pub struct RotationEvent {
    pub case: RotationCase,
    pub direction: RotationDirection,
    pub step: RotationStep,
    /// Node at the top of the rotated subtree before rotating.
    pub pivot: NodeId,
    /// Level of the pivot, measured before the rotation executes.
    pub pivot_level: u32,
    /// Path of the pivot position (unchanged by the rotation).
    pub pivot_path: TreePath,
    /// Every node whose root path changed, sorted by node id.
    pub moved: Vec<MovedNode>,
    /// The three stored pointers whose target node changed.
    pub links: Vec<LinkChange>,
}

/// Callbacks fired while an insertion restructures the tree. The tree passed
/// in is always in a consistent (BST-ordered, height-correct) state.
pub trait TreeObserver {
    fn attached(&mut self, _tree: &AvlTree, _node: NodeId, _path: &TreePath) {}
    fn rotated(&mut self, _tree: &AvlTree, _event: &RotationEvent) {}
}

/// Observer that ignores everything.
pub struct NoopObserver;

impl TreeObserver for NoopObserver {}

#[derive(Debug, Clone)]
pub struct InsertReport {
    pub node: NodeId,
    /// Path at which the node was attached, before any rebalancing.
    pub attach_path: TreePath,
    pub rotations: Vec<RotationEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    Order { key: i64 },
    HeightMismatch { stored: u32, actual: u32 },
    Imbalance { balance: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: TreePath,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {:?}", self.path, self.kind)
    }
}

#[derive(Debug, Clone, Default)]
pub struct AvlTree {
    nodes: Vec<TreeNode>,
    root: Option<NodeId>,
}

impl AvlTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.index()]
    }

    pub fn key(&self, id: NodeId) -> i64 {
        self.nodes[id.index()].key
    }

    /// Height of the whole tree (0 when empty).
    pub fn height(&self) -> u32 {
        self.h(self.root)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId::from_index)
    }

    /// Current target of a stored pointer.
    pub fn slot_target(&self, slot: Slot) -> Option<NodeId> {
        match slot {
            Slot::Root => self.root,
            Slot::Child(owner, side) => self.node(owner).child(side),
        }
    }

    pub fn find(&self, key: i64) -> Option<NodeId> {
        let mut cur = self.root;
        while let Some(id) = cur {
            let n = self.node(id);
            cur = match key.cmp(&n.key) {
                Ordering::Less => n.left,
                Ordering::Greater => n.right,
                Ordering::Equal => return Some(id),
            };
        }
        None
    }

    pub fn path_of(&self, key: i64) -> Result<TreePath, TreeError> {
        let mut cur = self.root;
        let mut path = TreePath::root();
        while let Some(id) = cur {
            let n = self.node(id);
            let side = match key.cmp(&n.key) {
                Ordering::Less => Side::Left,
                Ordering::Greater => Side::Right,
                Ordering::Equal => return Ok(path),
            };
            path = path.child(side);
            cur = n.child(side);
        }
        Err(TreeError::KeyNotFound(key))
    }

    /// Node at `path`, if that position is occupied.
    pub fn node_at(&self, path: &TreePath) -> Option<NodeId> {
        let mut cur = self.root?;
        for side in path.steps() {
            cur = self.node(cur).child(side)?;
        }
        Some(cur)
    }

    /// All nodes with their root paths, in preorder (Left before Right).
    pub fn preorder(&self) -> Vec<(NodeId, TreePath)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        if let Some(r) = self.root {
            self.collect_subtree(r, TreePath::root(), &mut out);
        }
        out
    }

    pub fn in_order_keys(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = Vec::new();
        let mut cur = self.root;
        loop {
            while let Some(id) = cur {
                stack.push(id);
                cur = self.node(id).left;
            }
            match stack.pop() {
                Some(id) => {
                    out.push(self.key(id));
                    cur = self.node(id).right;
                }
                None => break,
            }
        }
        out
    }

    pub fn insert(&mut self, key: i64) -> Result<Vec<RotationEvent>, TreeError> {
        Ok(self.insert_observed(key, &mut NoopObserver)?.rotations)
    }

    /// Inserts `key`, rebalancing on the way back up and notifying `observer`
    /// after the attach and after every single rotation.
    pub fn insert_observed<O>(&mut self, key: i64, observer: &mut O) -> Result<InsertReport, TreeError>
    where
        O: TreeObserver + ?Sized,
    {
        // (ancestor, side taken from it)
        let mut stack: Vec<(NodeId, Side)> = Vec::new();
        let mut cur = self.root;
        while let Some(id) = cur {
            let n = self.node(id);
            let side = match key.cmp(&n.key) {
                Ordering::Less => Side::Left,
                Ordering::Greater => Side::Right,
                Ordering::Equal => return Err(TreeError::DuplicateKey(key)),
            };
            stack.push((id, side));
            cur = n.child(side);
        }

        let id = NodeId::from_index(self.nodes.len());
        self.nodes.push(TreeNode {
            key,
            left: None,
            right: None,
            height: 1,
        });
        let mut attach_path = TreePath::root();
        for &(_, side) in &stack {
            attach_path = attach_path.child(side);
        }
        match stack.last() {
            None => self.root = Some(id),
            Some(&(parent, side)) => *self.nodes[parent.index()].child_mut(side) = Some(id),
        }
        observer.attached(self, id, &attach_path);

        let mut rotations = Vec::new();
        for i in (0..stack.len()).rev() {
            let (node, _) = stack[i];
            let before = self.node(node).height;
            self.update_height(node);
            let balance = self.balance(node);
            let slot = if i == 0 {
                Slot::Root
            } else {
                let (parent, side) = stack[i - 1];
                Slot::Child(parent, side)
            };
            let path = attach_path.prefix(i as u32);

            if !(-1..=1).contains(&balance) {
                let heavy = if balance > 1 { Side::Left } else { Side::Right };
                let child = self.node(node).child(heavy).expect("heavy side has a child");
                let child_balance = self.balance(child);
                let inner = match heavy {
                    Side::Left => child_balance < 0,
                    Side::Right => child_balance > 0,
                };
                let (case, outer_dir) = match (heavy, inner) {
                    (Side::Left, false) => (RotationCase::LL, RotationDirection::Right),
                    (Side::Right, false) => (RotationCase::RR, RotationDirection::Left),
                    (Side::Left, true) => (RotationCase::LR, RotationDirection::Right),
                    (Side::Right, true) => (RotationCase::RL, RotationDirection::Left),
                };
                if inner {
                    let inner_dir = match heavy {
                        Side::Left => RotationDirection::Left,
                        Side::Right => RotationDirection::Right,
                    };
                    let ev = self.rotate(
                        child,
                        inner_dir,
                        Slot::Child(node, heavy),
                        path.child(heavy),
                        case,
                        RotationStep::DoubleFirst,
                    );
                    observer.rotated(self, &ev);
                    rotations.push(ev);
                }
                let step = if inner {
                    RotationStep::DoubleSecond
                } else {
                    RotationStep::Single
                };
                let ev = self.rotate(node, outer_dir, slot, path, case, step);
                observer.rotated(self, &ev);
                rotations.push(ev);
                // an insertion rotation restores the subtree's previous height
                break;
            }
            if self.node(node).height == before {
                break;
            }
        }

        Ok(InsertReport {
            node: id,
            attach_path,
            rotations,
        })
    }

    /// Checks order, cached heights and balance. Returns the first violation
    /// found in preorder.
    pub fn validate(&self) -> Result<(), Violation> {
        match self.root {
            None => Ok(()),
            Some(r) => self.check(r, TreePath::root(), None, None).map(|_| ()),
        }
    }

    fn check(&self, id: NodeId, path: TreePath, lo: Option<i64>, hi: Option<i64>) -> Result<u32, Violation> {
        let n = self.node(id);
        if lo.is_some_and(|lo| n.key <= lo) || hi.is_some_and(|hi| n.key >= hi) {
            return Err(Violation {
                path,
                kind: ViolationKind::Order { key: n.key },
            });
        }
        let lh = match n.left {
            Some(c) => self.check(c, path.child(Side::Left), lo, Some(n.key))?,
            None => 0,
        };
        let rh = match n.right {
            Some(c) => self.check(c, path.child(Side::Right), Some(n.key), hi)?,
            None => 0,
        };
        let actual = 1 + lh.max(rh);
        if n.height != actual {
            return Err(Violation {
                path,
                kind: ViolationKind::HeightMismatch {
                    stored: n.height,
                    actual,
                },
            });
        }
        let balance = lh as i64 - rh as i64;
        if balance.abs() > 1 {
            return Err(Violation {
                path,
                kind: ViolationKind::Imbalance { balance },
            });
        }
        Ok(actual)
    }

    fn h(&self, id: Option<NodeId>) -> u32 {
        id.map_or(0, |id| self.node(id).height)
    }

    fn balance(&self, id: NodeId) -> i64 {
        let n = self.node(id);
        self.h(n.left) as i64 - self.h(n.right) as i64
    }

    fn update_height(&mut self, id: NodeId) {
        let n = self.node(id);
        let h = 1 + self.h(n.left).max(self.h(n.right));
        self.nodes[id.index()].height = h;
    }

    fn set_slot(&mut self, slot: Slot, target: Option<NodeId>) {
        match slot {
            Slot::Root => self.root = target,
            Slot::Child(owner, side) => *self.nodes[owner.index()].child_mut(side) = target,
        }
    }

    fn collect_subtree(&self, top: NodeId, top_path: TreePath, out: &mut Vec<(NodeId, TreePath)>) {
        let mut stack = vec![(top, top_path)];
        while let Some((id, path)) = stack.pop() {
            out.push((id, path));
            let n = self.node(id);
            if let Some(r) = n.right {
                stack.push((r, path.child(Side::Right)));
            }
            if let Some(l) = n.left {
                stack.push((l, path.child(Side::Left)));
            }
        }
    }

    fn rotate(
        &mut self,
        pivot: NodeId,
        direction: RotationDirection,
        slot: Slot,
        pivot_path: TreePath,
        case: RotationCase,
        step: RotationStep,
    ) -> RotationEvent {
        let mut before = Vec::new();
        self.collect_subtree(pivot, pivot_path, &mut before);

        // `up` is the child lifted into the pivot position; `inner` is its
        // subtree that changes parent.
        let up_side = match direction {
            RotationDirection::Right => Side::Left,
            RotationDirection::Left => Side::Right,
        };
        let down_side = up_side.opposite();
        let up = self.node(pivot).child(up_side).expect("rotation needs a child to lift");
        let inner = self.node(up).child(down_side);

        *self.nodes[pivot.index()].child_mut(up_side) = inner;
        *self.nodes[up.index()].child_mut(down_side) = Some(pivot);
        self.set_slot(slot, Some(up));
        self.update_height(pivot);
        self.update_height(up);

        let links = vec![
            LinkChange {
                slot,
                old: Some(pivot),
                new: Some(up),
            },
            LinkChange {
                slot: Slot::Child(pivot, up_side),
                old: Some(up),
                new: inner,
            },
            LinkChange {
                slot: Slot::Child(up, down_side),
                old: inner,
                new: Some(pivot),
            },
        ];

        let mut after = Vec::with_capacity(before.len());
        self.collect_subtree(up, pivot_path, &mut after);
        before.sort_unstable_by_key(|&(id, _)| id);
        after.sort_unstable_by_key(|&(id, _)| id);
        let moved = before
            .into_iter()
            .zip(after)
            .filter(|((_, old), (_, new))| old != new)
            .map(|((node, old_path), (_, new_path))| MovedNode {
                node,
                old_path,
                new_path,
            })
            .collect();

        RotationEvent {
            case,
            direction,
            step,
            pivot,
            pivot_level: pivot_path.level(),
            pivot_path,
            moved,
            links,
        }
    }

    #[cfg(test)]
    pub(crate) fn corrupt_height(&mut self, id: NodeId, height: u32) {
        self.nodes[id.index()].height = height;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(keys: &[i64]) -> (AvlTree, Vec<Vec<RotationEvent>>) {
        let mut t = AvlTree::new();
        let evs = keys.iter().map(|&k| t.insert(k).unwrap()).collect();
        (t, evs)
    }

    #[test]
    fn ascending_three_rotates_once_at_root() {
        let (t, evs) = build(&[1, 2, 3]);
        assert!(evs[0].is_empty() && evs[1].is_empty());
        assert_eq!(evs[2].len(), 1);
        let ev = &evs[2][0];
        assert_eq!(ev.case, RotationCase::RR);
        assert_eq!(ev.step, RotationStep::Single);
        assert_eq!(ev.pivot_level, 1);
        let root = t.root().unwrap();
        assert_eq!(t.key(root), 2);
        assert_eq!(t.key(t.node(root).left.unwrap()), 1);
        assert_eq!(t.key(t.node(root).right.unwrap()), 3);
    }

    #[test]
    fn balanced_order_never_rotates() {
        let (t, evs) = build(&[2, 1, 3]);
        assert!(evs.iter().all(|e| e.is_empty()));
        assert_eq!(t.key(t.root().unwrap()), 2);
    }

    #[test]
    fn lr_case_is_two_single_rotations() {
        let (t, evs) = build(&[3, 1, 2]);
        let evs = &evs[2];
        assert_eq!(evs.len(), 2);
        assert_eq!(evs[0].case, RotationCase::LR);
        assert_eq!(evs[0].step, RotationStep::DoubleFirst);
        assert_eq!(evs[0].direction, RotationDirection::Left);
        assert_eq!(evs[0].pivot_level, 2);
        assert_eq!(evs[1].step, RotationStep::DoubleSecond);
        assert_eq!(evs[1].direction, RotationDirection::Right);
        assert_eq!(evs[1].pivot_level, 1);
        assert_eq!(t.key(t.root().unwrap()), 2);
        assert_eq!(t.in_order_keys(), vec![1, 2, 3]);
    }

    #[test]
    fn duplicate_key_rejected() {
        let (mut t, _) = build(&[5, 3]);
        assert_eq!(t.insert(3).unwrap_err(), TreeError::DuplicateKey(3));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn paths() {
        let (t, _) = build(&[4, 2, 6, 3]);
        assert_eq!(t.path_of(4).unwrap(), TreePath::root());
        assert_eq!(t.path_of(4).unwrap().depth(), 0);
        assert_eq!(t.path_of(2).unwrap(), TreePath::from_steps(&[Side::Left]));
        assert_eq!(t.path_of(3).unwrap(), TreePath::from_steps(&[Side::Left, Side::Right]));
        assert_eq!(t.path_of(9).unwrap_err(), TreeError::KeyNotFound(9));
    }

    #[test]
    fn moved_nodes_of_root_rotation() {
        let (_, evs) = build(&[1, 2, 3]);
        let ev = &evs[2][0];
        let l = TreePath::from_steps(&[Side::Left]);
        let r = TreePath::from_steps(&[Side::Right]);
        let rr = TreePath::from_steps(&[Side::Right, Side::Right]);
        let got: Vec<_> = ev
            .moved
            .iter()
            .map(|m| (m.node.index(), m.old_path, m.new_path))
            .collect();
        assert_eq!(
            got,
            vec![(0, TreePath::root(), l), (1, r, TreePath::root()), (2, rr, r)]
        );
        assert_eq!(ev.links[0].slot, Slot::Root);
    }

    #[test]
    fn validate_empty_and_built() {
        assert!(AvlTree::new().validate().is_ok());
        let keys: Vec<i64> = (0..200).map(|i| (i * 7919) % 211).collect();
        let (t, _) = build(&keys);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn validate_reports_corrupted_height() {
        let (mut t, _) = build(&[4, 2, 6, 3]);
        let two = t.find(2).unwrap();
        t.corrupt_height(two, 7);
        let v = t.validate().unwrap_err();
        assert_eq!(v.path, TreePath::from_steps(&[Side::Left]));
        assert_eq!(v.kind, ViolationKind::HeightMismatch { stored: 7, actual: 2 });
    }

    #[test]
    fn path_order_is_preorder() {
        let (t, _) = build(&[8, 4, 12, 2, 6, 10, 14, 1, 3]);
        let mut paths: Vec<_> = t.preorder().into_iter().map(|(_, p)| p).collect();
        let pre = paths.clone();
        paths.sort();
        assert_eq!(paths, pre);
    }

    #[test]
    fn path_prefix_and_join() {
        let p = TreePath::from_steps(&[Side::Right, Side::Left, Side::Right]);
        assert_eq!(p.prefix(1), TreePath::from_steps(&[Side::Right]));
        let s = TreePath::from_steps(&[Side::Left, Side::Right]);
        assert_eq!(p.prefix(1).join(&s), p);
        assert_eq!(p.to_string(), "RLR");
    }
}
