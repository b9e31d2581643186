use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dfat::{level_order_index, Alternation};
use super::gray::binary_to_gray;
use super::space::AddressSpace;
use super::threshold::{Ratio, Threshold};
use super::word::check_width;
use super::AddressError;
use crate::avl::{AvlTree, NodeId, RotationEvent, TreePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Linear,
    Random,
    Gray,
    DfatGray,
    Hart,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Linear,
        SchemeKind::Random,
        SchemeKind::Gray,
        SchemeKind::DfatGray,
        SchemeKind::Hart,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SchemeKind::Linear => "linear",
            SchemeKind::Random => "random",
            SchemeKind::Gray => "gray",
            SchemeKind::DfatGray => "dfat-gray",
            SchemeKind::Hart => "hart",
        }
    }

    pub fn from_tag(tag: &str) -> Option<SchemeKind> {
        SchemeKind::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

/// A scheme plus its threshold ratio (only meaningful for [`SchemeKind::Hart`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub ratio: Option<Ratio>,
}

impl Scheme {
    pub fn new(kind: SchemeKind) -> Scheme {
        match kind {
            SchemeKind::Hart => Scheme::hart(Ratio::new(1, 2)),
            _ => Scheme { kind, ratio: None },
        }
    }

    pub fn linear() -> Scheme {
        Scheme::new(SchemeKind::Linear)
    }

    pub fn random() -> Scheme {
        Scheme::new(SchemeKind::Random)
    }

    pub fn gray() -> Scheme {
        Scheme::new(SchemeKind::Gray)
    }

    pub fn dfat_gray() -> Scheme {
        Scheme::new(SchemeKind::DfatGray)
    }

    pub fn hart(ratio: Ratio) -> Scheme {
        Scheme {
            kind: SchemeKind::Hart,
            ratio: Some(ratio),
        }
    }

    /// Threshold ratio as a float, for reporting.
    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio.map(|r| f64::from(*r.numer()) / f64::from(*r.denom()))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some(r) => write!(f, "{}@{}", self.kind.tag(), r),
            None => f.write_str(self.kind.tag()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub pointer_width: u32,
    /// Seeds the Random scheme's generator.
    pub seed: u64,
    /// Levels of the complete tree used for positional indexing. Defaults to
    /// the pointer width.
    pub depth_capacity: Option<u32>,
    pub alternation: Alternation,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, pointer_width: u32) -> Self {
        SchemeConfig {
            scheme,
            pointer_width,
            seed: 0,
            depth_capacity: None,
            alternation: Alternation::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_depth_capacity(mut self, capacity: u32) -> Self {
        self.depth_capacity = Some(capacity);
        self
    }

    pub fn depth_capacity(&self) -> u32 {
        self.depth_capacity.unwrap_or(self.pointer_width)
    }
}

/// Where a node at a given position ought to get its address from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Linear,
    Random,
    /// Gray code of this positional index.
    Positional(u64),
    /// Position too deep to index.
    Overflow,
}

/// How a node's current address was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Linear,
    Random,
    Positional(u64),
    /// Spare-queue address; the positional one was occupied or null.
    Conflict(u64),
    /// Spare-queue address; the position was too deep to index.
    Overflow,
}

impl Origin {
    fn satisfies(self, placement: Placement) -> bool {
        match (placement, self) {
            (Placement::Linear, Origin::Linear) | (Placement::Random, Origin::Random) => true,
            (Placement::Positional(want), Origin::Positional(have) | Origin::Conflict(have)) => want == have,
            (Placement::Overflow, Origin::Overflow) => true,
            _ => false,
        }
    }

    pub fn region(self) -> Region {
        match self {
            Origin::Linear => Region::Linear,
            Origin::Random => Region::Random,
            Origin::Positional(_) => Region::Positional,
            Origin::Conflict(_) | Origin::Overflow => Region::Spare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Linear,
    Random,
    Positional,
    Spare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub address: u64,
    pub origin: Origin,
}

/// A node whose address changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relabel {
    pub node: NodeId,
    pub old: u64,
    pub new: u64,
}

/// Per-trial addressing state: the scheme, its address space and the current
/// assignment of every node.
#[derive(Debug, Clone)]
pub struct Addressing {
    config: SchemeConfig,
    threshold: Option<Threshold>,
    space: AddressSpace,
    table: Vec<Option<Assignment>>,
    rng: ChaCha8Rng,
    overflow_fallbacks: u64,
    conflict_fallbacks: u64,
}

impl Addressing {
    /// `planned_nodes` sizes the hybrid threshold; other schemes ignore it.
    pub fn new(config: SchemeConfig, planned_nodes: u64) -> Result<Self, AddressError> {
        check_width(config.pointer_width)?;
        let capacity = config.depth_capacity();
        if capacity == 0 || capacity > config.pointer_width {
            return Err(AddressError::InvalidArgument(format!(
                "depth capacity {capacity} must be in 1..={}",
                config.pointer_width
            )));
        }
        let threshold = match config.scheme.kind {
            SchemeKind::Hart => {
                let ratio = config
                    .scheme
                    .ratio
                    .ok_or_else(|| AddressError::InvalidArgument("hart needs a threshold ratio".into()))?;
                Some(Threshold::for_nodes(planned_nodes, ratio)?)
            }
            _ => None,
        };
        Ok(Addressing {
            threshold,
            space: AddressSpace::new(config.pointer_width)?,
            table: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            overflow_fallbacks: 0,
            conflict_fallbacks: 0,
            config,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn threshold(&self) -> Option<Threshold> {
        self.threshold
    }

    pub fn space(&self) -> &AddressSpace {
        &self.space
    }

    pub fn width(&self) -> u32 {
        self.config.pointer_width
    }

    /// Positions that could not be indexed and fell back to the spare queue.
    pub fn overflow_fallbacks(&self) -> u64 {
        self.overflow_fallbacks
    }

    /// Positional addresses that were occupied or null.
    pub fn conflict_fallbacks(&self) -> u64 {
        self.conflict_fallbacks
    }

    pub fn assignment(&self, node: NodeId) -> Option<Assignment> {
        self.table.get(node.index()).copied().flatten()
    }

    pub fn address(&self, node: NodeId) -> Option<u64> {
        self.assignment(node).map(|a| a.address)
    }

    /// Address of every assigned node, indexed by node id.
    pub fn addresses(&self) -> Vec<Option<u64>> {
        self.table.iter().map(|a| a.map(|a| a.address)).collect()
    }

    /// Positional index for `path` under this scheme, if it has one.
    pub fn positional_index(&self, path: &TreePath) -> Result<u64, AddressError> {
        let capacity = self.config.depth_capacity();
        match self.config.scheme.kind {
            SchemeKind::Gray => level_order_index(path, capacity),
            _ => self.config.alternation.rank(path, capacity),
        }
    }

    pub fn placement(&self, path: &TreePath) -> Placement {
        let positional = || match self.positional_index(path) {
            Ok(i) => Placement::Positional(i),
            Err(_) => Placement::Overflow,
        };
        match self.config.scheme.kind {
            SchemeKind::Linear => Placement::Linear,
            SchemeKind::Random => Placement::Random,
            SchemeKind::Gray | SchemeKind::DfatGray => positional(),
            SchemeKind::Hart => {
                let t = self.threshold.expect("hart has a threshold");
                if path.level() <= t.level {
                    Placement::Linear
                } else {
                    positional()
                }
            }
        }
    }

    /// Gives a freshly attached node its address.
    pub fn assign_address(&mut self, node: NodeId, path: &TreePath) -> Result<u64, AddressError> {
        if let Some(a) = self.assignment(node) {
            return Err(AddressError::InvalidArgument(format!(
                "node {node} already holds address {}",
                a.address
            )));
        }
        let placement = self.placement(path);
        let a = self.allocate(node, placement)?;
        Ok(a.address)
    }

    /// Re-addresses the nodes a rotation moved, looking only at the event.
    pub fn reassign_after_rotation(&mut self, event: &RotationEvent) -> Result<Vec<Relabel>, AddressError> {
        if matches!(self.config.scheme.kind, SchemeKind::Linear | SchemeKind::Random) {
            return Ok(Vec::new());
        }
        let mut pending = Vec::new();
        for m in &event.moved {
            let placement = self.placement(&m.new_path);
            match self.assignment(m.node) {
                Some(a) if a.origin.satisfies(placement) => {}
                _ => pending.push((m.new_path, m.node, placement)),
            }
        }
        self.apply(pending)
    }

    /// Walks the whole tree from the root, assigning unassigned nodes and
    /// re-addressing every node whose position no longer matches its address.
    pub fn reassign_full_pass(&mut self, tree: &AvlTree) -> Result<Vec<Relabel>, AddressError> {
        let mut pending = Vec::new();
        if let Some(root) = tree.root() {
            self.visit(tree, root, TreePath::root(), &mut pending);
        }
        self.apply(pending)
    }

    fn visit(&self, tree: &AvlTree, node: NodeId, path: TreePath, pending: &mut Vec<(TreePath, NodeId, Placement)>) {
        let placement = self.placement(&path);
        match self.assignment(node) {
            Some(a) if a.origin.satisfies(placement) => {}
            _ => pending.push((path, node, placement)),
        }
        let n = tree.node(node);
        if let Some(l) = n.left {
            self.visit(tree, l, path.child(crate::avl::Side::Left), pending);
        }
        if let Some(r) = n.right {
            self.visit(tree, r, path.child(crate::avl::Side::Right), pending);
        }
    }

    /// Releases every pending node's old address, then allocates in preorder
    /// of the new positions.
    fn apply(&mut self, mut pending: Vec<(TreePath, NodeId, Placement)>) -> Result<Vec<Relabel>, AddressError> {
        pending.sort_unstable_by_key(|p| p.0);
        let mut olds = Vec::with_capacity(pending.len());
        for &(_, node, _) in &pending {
            let old = self.assignment(node).map(|a| a.address);
            if let Some(addr) = old {
                self.space.release(addr);
                self.table[node.index()] = None;
            }
            olds.push(old);
        }
        let mut relabels = Vec::new();
        for ((_, node, placement), old) in pending.into_iter().zip(olds) {
            let a = self.allocate(node, placement)?;
            if let Some(old) = old {
                if old != a.address {
                    relabels.push(Relabel {
                        node,
                        old,
                        new: a.address,
                    });
                }
            }
        }
        Ok(relabels)
    }

    fn allocate(&mut self, node: NodeId, placement: Placement) -> Result<Assignment, AddressError> {
        let a = match placement {
            Placement::Linear => Assignment {
                address: self.space.allocate_linear(node)?,
                origin: Origin::Linear,
            },
            Placement::Random => Assignment {
                address: self.space.allocate_random(node, &mut self.rng)?,
                origin: Origin::Random,
            },
            Placement::Positional(index) => {
                let wanted = binary_to_gray(index, self.config.pointer_width)?;
                if self.space.is_available(wanted) {
                    self.space.claim(wanted, node)?;
                    Assignment {
                        address: wanted,
                        origin: Origin::Positional(index),
                    }
                } else {
                    self.conflict_fallbacks += 1;
                    Assignment {
                        address: self.space.allocate_from_spare_queue(node)?,
                        origin: Origin::Conflict(index),
                    }
                }
            }
            Placement::Overflow => {
                self.overflow_fallbacks += 1;
                Assignment {
                    address: self.space.allocate_from_spare_queue(node)?,
                    origin: Origin::Overflow,
                }
            }
        };
        if self.table.len() <= node.index() {
            self.table.resize(node.index() + 1, None);
        }
        self.table[node.index()] = Some(a);
        Ok(a)
    }
}
