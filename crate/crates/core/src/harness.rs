//! Seeded trials over the addressing schemes.
//!
//! A trial inserts a shuffled permutation of `0..n` into a fresh tree; the
//! addressing layer assigns each new node an address and re-addresses nodes
//! moved by rotations, and every rotation's rewritten words are charged to a
//! [`FlipLedger`]. Only the addressing and accounting work is timed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::addressing::{
    tree_height_estimate, AddressError, Addressing, Ratio, Scheme, SchemeConfig, SchemeKind, Threshold,
};
use crate::avl::{AvlTree, NodeId, NoopObserver, RotationEvent, RotationStep, TreeError, TreeObserver, TreePath};
use crate::pcm::{rotation_writes, total_flips, AccountingConfig, FlipLedger, MemoryImage, WordWrite};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Address(#[from] AddressError),
    #[error("flip oracle mismatch at rotation {rotation}: event-driven {event_flips}, snapshot {snapshot_flips}")]
    OracleMismatch {
        rotation: u64,
        event_flips: u64,
        snapshot_flips: u64,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// How moved nodes are found after a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReassignMode {
    /// Only the nodes listed in the rotation event are examined.
    #[default]
    Incremental,
    /// The whole tree is walked from the root after every structural change.
    FullPass,
}

/// Node count paired with a pointer width: `2^(width-2) - 1`.
pub fn nodes_for_width(width: u32) -> u64 {
    assert!((3..=63).contains(&width), "width {width} has no node pairing");
    (1u64 << (width - 2)) - 1
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    splitmix(a ^ splitmix(b))
}

/// Seed of the key permutation for one trial. Schemes compared at the same
/// width and trial index see the same permutation.
pub fn workload_seed(base_seed: u64, width: u32, trial: u32) -> u64 {
    mix(mix(base_seed, u64::from(width)), u64::from(trial))
}

/// Seed of a scheme's own generator (Random scheme) within a trial.
pub fn scheme_seed(workload_seed: u64, scheme: &Scheme) -> u64 {
    let kind = scheme.kind as u64;
    let ratio = scheme
        .ratio
        .map_or(0, |r| u64::from(*r.numer()) << 32 | u64::from(*r.denom()));
    mix(mix(workload_seed, kind + 1), ratio)
}

/// Uniform permutation of `0..n` by a seeded Fisher-Yates shuffle.
pub fn gen_dataset(n: u64, seed: u64) -> Result<Vec<i64>, HarnessError> {
    if n < 1 {
        return Err(HarnessError::Config("dataset needs at least one item".into()));
    }
    let mut keys: Vec<i64> = (0..n as i64).collect();
    keys.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(keys)
}

#[derive(Debug, Clone, Copy)]
pub struct TrialSpec {
    pub width: u32,
    pub num_nodes: u64,
    pub scheme: Scheme,
    /// Workload seed; the scheme seed is derived from it.
    pub seed: u64,
    pub accounting: AccountingConfig,
    pub mode: ReassignMode,
    /// Cross-check every rotation against full before/after snapshots.
    pub verify_oracle: bool,
}

impl TrialSpec {
    pub fn new(width: u32, scheme: Scheme, seed: u64) -> Self {
        TrialSpec {
            width,
            num_nodes: nodes_for_width(width),
            scheme,
            seed,
            accounting: AccountingConfig::default(),
            mode: ReassignMode::default(),
            verify_oracle: false,
        }
    }

    pub fn scheme_config(&self) -> SchemeConfig {
        SchemeConfig::new(self.scheme, self.width).with_seed(scheme_seed(self.seed, &self.scheme))
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub ledger: FlipLedger,
    pub wall_time: Duration,
    pub seed: u64,
    pub conflict_fallbacks: u64,
    pub oracle_checks: u64,
}

struct SessionState {
    addressing: Addressing,
    accounting: AccountingConfig,
    mode: ReassignMode,
    ledger: FlipLedger,
    elapsed: Duration,
    verify: bool,
    image: Option<MemoryImage>,
    oracle_checks: u64,
    last_writes: Vec<Vec<WordWrite>>,
    error: Option<HarnessError>,
}

impl SessionState {
    fn on_attach(&mut self, tree: &AvlTree, node: NodeId, path: &TreePath) -> Result<(), HarnessError> {
        let start = Instant::now();
        match self.mode {
            ReassignMode::Incremental => {
                self.addressing.assign_address(node, path)?;
            }
            ReassignMode::FullPass => {
                self.addressing.reassign_full_pass(tree)?;
            }
        }
        self.elapsed += start.elapsed();
        if self.verify {
            self.image = Some(MemoryImage::capture(tree, &self.addressing));
        }
        Ok(())
    }

    fn on_rotation(&mut self, tree: &AvlTree, event: &RotationEvent) -> Result<(), HarnessError> {
        let start = Instant::now();
        let relabels = match self.mode {
            ReassignMode::Incremental => self.addressing.reassign_after_rotation(event)?,
            ReassignMode::FullPass => self.addressing.reassign_full_pass(tree)?,
        };
        let writes = rotation_writes(tree, &self.addressing, event, &relabels);
        let flips = self.ledger.record_rotation(event, &writes, &self.accounting);
        self.elapsed += start.elapsed();

        if let Some(before) = self.image.take() {
            let after = MemoryImage::capture(tree, &self.addressing);
            let snapshot = before.diff(&after);
            let snapshot_flips = total_flips(&snapshot, &self.accounting);
            self.oracle_checks += 1;
            let mut event_writes = writes.clone();
            event_writes.sort_by_key(|w| w.location);
            if snapshot_flips != flips || snapshot != event_writes {
                return Err(HarnessError::OracleMismatch {
                    rotation: self.oracle_checks,
                    event_flips: flips,
                    snapshot_flips,
                });
            }
            self.image = Some(after);
        }
        self.last_writes.push(writes);
        Ok(())
    }
}

impl TreeObserver for SessionState {
    fn attached(&mut self, tree: &AvlTree, node: NodeId, path: &TreePath) {
        if self.error.is_none() {
            if let Err(e) = self.on_attach(tree, node, path) {
                self.error = Some(e);
            }
        }
    }

    fn rotated(&mut self, tree: &AvlTree, event: &RotationEvent) {
        if self.error.is_none() {
            if let Err(e) = self.on_rotation(tree, event) {
                self.error = Some(e);
            }
        }
    }
}

/// A tree plus its addressing and accounting state, driven one key at a time.
pub struct TrialSession {
    tree: AvlTree,
    state: SessionState,
}

impl TrialSession {
    pub fn new(spec: &TrialSpec) -> Result<Self, HarnessError> {
        spec.accounting.validate()?;
        let capacity = (1u64 << spec.width.min(63)) - 1;
        if spec.num_nodes >= capacity {
            return Err(HarnessError::Config(format!(
                "{} nodes do not fit a {}-bit address space",
                spec.num_nodes, spec.width
            )));
        }
        Ok(TrialSession {
            tree: AvlTree::new(),
            state: SessionState {
                addressing: Addressing::new(spec.scheme_config(), spec.num_nodes)?,
                accounting: spec.accounting,
                mode: spec.mode,
                ledger: FlipLedger::new(),
                elapsed: Duration::ZERO,
                verify: spec.verify_oracle,
                image: None,
                oracle_checks: 0,
                last_writes: Vec::new(),
                error: None,
            },
        })
    }

    /// Inserts one key; returns the rotations it caused.
    pub fn insert(&mut self, key: i64) -> Result<Vec<RotationEvent>, HarnessError> {
        self.state.last_writes.clear();
        let report = self.tree.insert_observed(key, &mut self.state)?;
        if let Some(e) = self.state.error.take() {
            return Err(e);
        }
        Ok(report.rotations)
    }

    pub fn tree(&self) -> &AvlTree {
        &self.tree
    }

    pub fn addressing(&self) -> &Addressing {
        &self.state.addressing
    }

    pub fn ledger(&self) -> &FlipLedger {
        &self.state.ledger
    }

    /// Words written by each rotation of the most recent insert, in the
    /// order the rotations were returned.
    pub fn last_writes(&self) -> &[Vec<WordWrite>] {
        &self.state.last_writes
    }

    pub fn elapsed(&self) -> Duration {
        self.state.elapsed
    }

    pub fn oracle_checks(&self) -> u64 {
        self.state.oracle_checks
    }

    fn finish(mut self, seed: u64) -> TrialOutcome {
        self.state.ledger.overflow_fallbacks = self.state.addressing.overflow_fallbacks();
        TrialOutcome {
            conflict_fallbacks: self.state.addressing.conflict_fallbacks(),
            ledger: self.state.ledger,
            wall_time: self.state.elapsed,
            seed,
            oracle_checks: self.state.oracle_checks,
        }
    }
}

pub fn run_trial(spec: &TrialSpec) -> Result<TrialOutcome, HarnessError> {
    let keys = gen_dataset(spec.num_nodes, spec.seed)?;
    let mut session = TrialSession::new(spec)?;
    for k in keys {
        session.insert(k)?;
    }
    Ok(session.finish(spec.seed))
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub widths: Vec<u32>,
    pub trials: u32,
    pub schemes: Vec<Scheme>,
    pub base_seed: u64,
    pub accounting: AccountingConfig,
    pub mode: ReassignMode,
}

impl ExperimentConfig {
    pub fn new(widths: Vec<u32>, schemes: Vec<Scheme>, trials: u32) -> Self {
        ExperimentConfig {
            widths,
            trials,
            schemes,
            base_seed: 0,
            accounting: AccountingConfig::default(),
            mode: ReassignMode::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials < 1 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.widths.is_empty() || self.schemes.is_empty() {
            return Err(HarnessError::Config("need at least one width and one scheme".into()));
        }
        if let Some(w) = self.widths.iter().find(|w| !(8..=63).contains(*w)) {
            return Err(HarnessError::Config(format!("width {w} outside 8..=63")));
        }
        self.accounting.validate()?;
        Ok(())
    }
}

/// Aggregate of all trials for one (width, scheme) cell.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub width: u32,
    pub scheme: Scheme,
    pub num_nodes: u64,
    pub trials: u32,
    pub base_seed: u64,
    /// Workload seed of each trial, in trial order.
    pub seeds: Vec<u64>,
    pub ledger: FlipLedger,
    pub mean_flips_per_rotation: Option<f64>,
    /// Rotations per level, averaged over trials.
    pub rotations_per_level: BTreeMap<u32, f64>,
    /// Mean addressing + accounting time per trial.
    pub wall_time: Duration,
    pub overflow_fallbacks: u64,
    pub conflict_fallbacks: u64,
}

pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Vec<ExperimentResult>, HarnessError> {
    config.validate()?;
    let mut cells = Vec::new();
    for &width in &config.widths {
        for scheme in &config.schemes {
            cells.push((width, *scheme));
        }
    }
    let tasks: Vec<TrialSpec> = cells
        .iter()
        .flat_map(|&(width, scheme)| {
            (0..config.trials).map(move |t| TrialSpec {
                accounting: config.accounting,
                mode: config.mode,
                ..TrialSpec::new(width, scheme, workload_seed(config.base_seed, width, t))
            })
        })
        .collect();
    let outcomes: Vec<TrialOutcome> =
        in_pool(jobs, || tasks.par_iter().map(run_trial).collect::<Result<Vec<_>, _>>())??;

    let per_cell = config.trials as usize;
    Ok(cells
        .iter()
        .zip(outcomes.chunks(per_cell))
        .map(|(&(width, scheme), chunk)| aggregate(width, scheme, config.base_seed, chunk))
        .collect())
}

fn aggregate(width: u32, scheme: Scheme, base_seed: u64, outcomes: &[TrialOutcome]) -> ExperimentResult {
    let mut ledger = FlipLedger::new();
    let mut wall = Duration::ZERO;
    let mut conflicts = 0;
    for o in outcomes {
        ledger.merge(&o.ledger);
        wall += o.wall_time;
        conflicts += o.conflict_fallbacks;
    }
    let trials = outcomes.len() as u32;
    let rotations_per_level = ledger
        .rotations_per_level
        .iter()
        .map(|(&l, &c)| (l, c as f64 / f64::from(trials)))
        .collect();
    ExperimentResult {
        width,
        scheme,
        num_nodes: nodes_for_width(width),
        trials,
        base_seed,
        seeds: outcomes.iter().map(|o| o.seed).collect(),
        mean_flips_per_rotation: ledger.mean_flips_per_rotation(),
        rotations_per_level,
        wall_time: wall / trials.max(1),
        overflow_fallbacks: ledger.overflow_fallbacks,
        conflict_fallbacks: conflicts,
        ledger,
    }
}

/// Metrics for one threshold ratio.
#[derive(Debug, Clone)]
pub struct ThresholdComparison {
    pub ratio: Ratio,
    pub threshold: Threshold,
    pub width: u32,
    pub trials: u32,
    pub mean_flips_per_rotation: Option<f64>,
    /// Mean addressing + accounting time per trial.
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub ratios: Vec<Ratio>,
    pub trials: u32,
    pub base_seed: u64,
    pub accounting: AccountingConfig,
    pub mode: ReassignMode,
    pub jobs: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            ratios: vec![Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(3, 4)],
            trials: 1,
            base_seed: 0,
            accounting: AccountingConfig::default(),
            mode: ReassignMode::default(),
            jobs: 1,
        }
    }
}

/// Runs the hybrid scheme at each ratio on trees of `num_nodes` keys, with
/// pointer width `H + 2`.
pub fn compare_thresholds(
    num_nodes: u64,
    options: &CompareOptions,
) -> Result<BTreeMap<Ratio, ThresholdComparison>, HarnessError> {
    let height = tree_height_estimate(num_nodes)?;
    let width = height + 2;
    if options.trials < 1 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    let mut out = BTreeMap::new();
    for &ratio in &options.ratios {
        let threshold = Threshold::for_nodes(num_nodes, ratio)?;
        let scheme = Scheme::hart(ratio);
        let tasks: Vec<TrialSpec> = (0..options.trials)
            .map(|t| TrialSpec {
                num_nodes,
                accounting: options.accounting,
                mode: options.mode,
                ..TrialSpec::new(width.max(3), scheme, workload_seed(options.base_seed, width, t))
            })
            .collect();
        let outcomes = in_pool(options.jobs, || {
            tasks.par_iter().map(run_trial).collect::<Result<Vec<_>, _>>()
        })??;
        let mut ledger = FlipLedger::new();
        let mut wall = Duration::ZERO;
        for o in &outcomes {
            ledger.merge(&o.ledger);
            wall += o.wall_time;
        }
        out.insert(
            ratio,
            ThresholdComparison {
                ratio,
                threshold,
                width,
                trials: options.trials,
                mean_flips_per_rotation: ledger.mean_flips_per_rotation(),
                wall_time: wall / options.trials,
            },
        );
    }
    Ok(out)
}

/// Average rotation count per level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelHistogram {
    pub trials: u32,
    /// Level (root = 1) to mean count.
    pub counts: BTreeMap<u32, f64>,
}

impl LevelHistogram {
    /// Level with the largest mean count (shallowest on ties).
    pub fn peak(&self) -> Option<(u32, f64)> {
        self.counts
            .iter()
            .fold(None, |best: Option<(u32, f64)>, (&l, &c)| match best {
                Some((_, bc)) if bc >= c => best,
                _ => Some((l, c)),
            })
    }

    pub fn total(&self) -> f64 {
        self.counts.values().sum()
    }

    /// Same histogram with the root numbered `root_level` instead of 1.
    pub fn rebased(&self, root_level: u32) -> LevelHistogram {
        LevelHistogram {
            trials: self.trials,
            counts: self
                .counts
                .iter()
                .map(|(&l, &c)| (l - crate::avl::ROOT_LEVEL + root_level, c))
                .collect(),
        }
    }
}

/// How double rotations enter a rotations-per-level histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DoubleRotationCount {
    /// Two single rotations, each at its own pivot level.
    #[default]
    Decomposed,
    /// One rotation at the level of the unbalanced node.
    Once,
}

/// Rotations per level at `width`, averaged over `trials` permutations. The
/// rotation structure depends only on the key order, so no scheme is needed;
/// trial `t` uses the same permutation as every scheme's trial `t`.
pub fn rotations_histogram(
    width: u32,
    trials: u32,
    base_seed: u64,
    jobs: usize,
) -> Result<LevelHistogram, HarnessError> {
    rotations_histogram_with(width, trials, base_seed, jobs, DoubleRotationCount::Decomposed)
}

/// [`rotations_histogram`] with an explicit double-rotation convention.
pub fn rotations_histogram_with(
    width: u32,
    trials: u32,
    base_seed: u64,
    jobs: usize,
    doubles: DoubleRotationCount,
) -> Result<LevelHistogram, HarnessError> {
    if trials < 1 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    let n = nodes_for_width(width);
    let per_trial = in_pool(jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|t| -> Result<BTreeMap<u32, u64>, HarnessError> {
                let mut tree = AvlTree::new();
                let mut counts = BTreeMap::new();
                for k in gen_dataset(n, workload_seed(base_seed, width, t))? {
                    for ev in tree.insert_observed(k, &mut NoopObserver)?.rotations {
                        if doubles == DoubleRotationCount::Once && ev.step == RotationStep::DoubleFirst {
                            continue;
                        }
                        *counts.entry(ev.pivot_level).or_default() += 1;
                    }
                }
                Ok(counts)
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut sums: BTreeMap<u32, u64> = BTreeMap::new();
    for counts in &per_trial {
        for (&l, &c) in counts {
            *sums.entry(l).or_default() += c;
        }
    }
    Ok(LevelHistogram {
        trials,
        counts: sums
            .into_iter()
            .map(|(l, c)| (l, c as f64 / f64::from(trials)))
            .collect(),
    })
}

/// Every scheme evaluated in the comparison figures: Linear, Random, Gray,
/// DFAT-Gray and the hybrid at `hart_ratio`.
pub fn paper_schemes(hart_ratio: Ratio) -> Vec<Scheme> {
    SchemeKind::ALL
        .into_iter()
        .map(|k| match k {
            SchemeKind::Hart => Scheme::hart(hart_ratio),
            k => Scheme::new(k),
        })
        .collect()
}
