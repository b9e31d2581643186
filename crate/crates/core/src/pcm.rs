//! Bit-flip accounting for PCM writes.
//!
//! A write of a word into a cell costs the Hamming distance between the old
//! and new contents. Rotations rewrite child pointers (and, for positional
//! schemes, may move nodes to new addresses); every such write is charged to
//! the rotation that caused it, at the rotation's pivot level.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::addressing::{null_word, AddressError, AddressWord, Addressing, Relabel};
use crate::avl::{AvlTree, NodeId, RotationEvent, RotationStep, Side, Slot};

pub fn hamming(a: AddressWord, b: AddressWord) -> Result<u32, AddressError> {
    if a.width() != b.width() {
        return Err(AddressError::WidthMismatch(a.width(), b.width()));
    }
    Ok((a.value() ^ b.value()).count_ones())
}

/// A stored word: a pointer slot or a node's own address label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordLocation {
    /// The tree's root pointer.
    RootSlot,
    PointerField(NodeId, Side),
    NodeRelabel(NodeId),
}

impl WordLocation {
    fn of_slot(slot: Slot) -> WordLocation {
        match slot {
            Slot::Root => WordLocation::RootSlot,
            Slot::Child(owner, side) => WordLocation::PointerField(owner, side),
        }
    }

    pub fn is_pointer(&self) -> bool {
        !matches!(self, WordLocation::NodeRelabel(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordWrite {
    pub location: WordLocation,
    pub old: u64,
    pub new: u64,
}

impl WordWrite {
    pub fn flips(&self) -> u32 {
        (self.old ^ self.new).count_ones()
    }
}

/// Which write categories count towards flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountingConfig {
    pub count_pointer_rewrites: bool,
    pub count_node_relabels: bool,
    /// Count a double rotation as one rotation (credited at its second
    /// step's pivot level) instead of two.
    pub count_double_rotation_once: bool,
}

impl Default for AccountingConfig {
    fn default() -> Self {
        AccountingConfig::pointer()
    }
}

impl AccountingConfig {
    pub fn pointer() -> Self {
        AccountingConfig {
            count_pointer_rewrites: true,
            count_node_relabels: false,
            count_double_rotation_once: false,
        }
    }

    pub fn relabel() -> Self {
        AccountingConfig {
            count_pointer_rewrites: false,
            count_node_relabels: true,
            count_double_rotation_once: false,
        }
    }

    pub fn both() -> Self {
        AccountingConfig {
            count_pointer_rewrites: true,
            count_node_relabels: true,
            count_double_rotation_once: false,
        }
    }

    pub fn validate(&self) -> Result<(), AddressError> {
        if self.count_pointer_rewrites || self.count_node_relabels {
            Ok(())
        } else {
            Err(AddressError::InvalidArgument(
                "accounting must count at least one write category".into(),
            ))
        }
    }

    pub fn counts(&self, location: &WordLocation) -> bool {
        if location.is_pointer() {
            self.count_pointer_rewrites
        } else {
            self.count_node_relabels
        }
    }

    pub fn tag(&self) -> &'static str {
        match (self.count_pointer_rewrites, self.count_node_relabels) {
            (true, false) => "pointer",
            (false, true) => "relabel",
            _ => "both",
        }
    }
}

/// Flip and rotation counters for one trial (or a merge of several).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipLedger {
    pub total_flips: u64,
    pub total_rotations: u64,
    pub flips_per_level: BTreeMap<u32, u64>,
    pub rotations_per_level: BTreeMap<u32, u64>,
    pub overflow_fallbacks: u64,
}

impl FlipLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Charges `writes` to `event`. Returns the flips added.
    pub fn record_rotation(&mut self, event: &RotationEvent, writes: &[WordWrite], acct: &AccountingConfig) -> u64 {
        let flips: u64 = writes
            .iter()
            .filter(|w| acct.counts(&w.location))
            .map(|w| u64::from(w.flips()))
            .sum();
        let level = event.pivot_level;
        let counted = !(acct.count_double_rotation_once && event.step == RotationStep::DoubleFirst);
        if counted {
            self.total_rotations += 1;
            *self.rotations_per_level.entry(level).or_default() += 1;
        }
        self.total_flips += flips;
        if flips > 0 || counted {
            *self.flips_per_level.entry(level).or_default() += flips;
        }
        flips
    }

    /// Average flips per rotation; `None` when nothing rotated.
    pub fn mean_flips_per_rotation(&self) -> Option<f64> {
        if self.total_rotations == 0 {
            None
        } else {
            Some(self.total_flips as f64 / self.total_rotations as f64)
        }
    }

    pub fn merge(&mut self, other: &FlipLedger) {
        self.total_flips += other.total_flips;
        self.total_rotations += other.total_rotations;
        self.overflow_fallbacks += other.overflow_fallbacks;
        for (&l, &v) in &other.flips_per_level {
            *self.flips_per_level.entry(l).or_default() += v;
        }
        for (&l, &v) in &other.rotations_per_level {
            *self.rotations_per_level.entry(l).or_default() += v;
        }
    }
}

fn word_of(addressing: &Addressing, target: Option<NodeId>, old: &HashMap<NodeId, u64>) -> u64 {
    match target {
        None => null_word(addressing.width()),
        Some(n) => old
            .get(&n)
            .copied()
            .unwrap_or_else(|| addressing.address(n).expect("live node has an address")),
    }
}

/// Words a rotation rewrote, derived from the event and the relabel list.
///
/// Candidate pointers are the three relinked slots plus both fields of every
/// moved node (relabeled nodes are always moved nodes, so their parents'
/// fields are covered). Must be called after `relabels` has been applied.
pub fn rotation_writes(
    tree: &AvlTree,
    addressing: &Addressing,
    event: &RotationEvent,
    relabels: &[Relabel],
) -> Vec<WordWrite> {
    let old_addr: HashMap<NodeId, u64> = relabels.iter().map(|r| (r.node, r.old)).collect();
    let current = HashMap::new();

    let mut slots: Vec<Slot> = event.links.iter().map(|l| l.slot).collect();
    for m in &event.moved {
        slots.push(Slot::Child(m.node, Side::Left));
        slots.push(Slot::Child(m.node, Side::Right));
    }
    slots.sort_unstable();
    slots.dedup();

    let mut writes = Vec::new();
    for slot in slots {
        let new_target = tree.slot_target(slot);
        let old_target = event
            .links
            .iter()
            .find(|l| l.slot == slot)
            .map_or(new_target, |l| l.old);
        let old = word_of(addressing, old_target, &old_addr);
        let new = word_of(addressing, new_target, &current);
        if old != new {
            writes.push(WordWrite {
                location: WordLocation::of_slot(slot),
                old,
                new,
            });
        }
    }
    for r in relabels {
        if r.old != r.new {
            writes.push(WordWrite {
                location: WordLocation::NodeRelabel(r.node),
                old: r.old,
                new: r.new,
            });
        }
    }
    writes
}

/// Every stored word of a tree: the root pointer, both child fields of every
/// node and every node's address label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryImage {
    words: BTreeMap<WordLocation, u64>,
}

impl MemoryImage {
    pub fn capture(tree: &AvlTree, addressing: &Addressing) -> MemoryImage {
        let null = null_word(addressing.width());
        let word = |t: Option<NodeId>| t.and_then(|n| addressing.address(n)).unwrap_or(null);
        let mut words = BTreeMap::new();
        words.insert(WordLocation::RootSlot, word(tree.root()));
        for id in tree.node_ids() {
            let Some(addr) = addressing.address(id) else {
                continue;
            };
            let n = tree.node(id);
            words.insert(WordLocation::PointerField(id, Side::Left), word(n.left));
            words.insert(WordLocation::PointerField(id, Side::Right), word(n.right));
            words.insert(WordLocation::NodeRelabel(id), addr);
        }
        MemoryImage { words }
    }

    pub fn get(&self, location: &WordLocation) -> Option<u64> {
        self.words.get(location).copied()
    }

    /// Words that differ between `self` (before) and `after`. Locations only
    /// present on one side are ignored: they belong to nodes that did not yet
    /// exist.
    pub fn diff(&self, after: &MemoryImage) -> Vec<WordWrite> {
        self.words
            .iter()
            .filter_map(|(loc, &old)| {
                let new = *after.words.get(loc)?;
                (old != new).then_some(WordWrite {
                    location: *loc,
                    old,
                    new,
                })
            })
            .collect()
    }
}

/// Flips of `writes` under `acct`.
pub fn total_flips(writes: &[WordWrite], acct: &AccountingConfig) -> u64 {
    writes
        .iter()
        .filter(|w| acct.counts(&w.location))
        .map(|w| u64::from(w.flips()))
        .sum()
}
