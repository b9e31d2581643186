//! Properties checked against independent oracles: a sorted-vector model of
//! the tree, full memory snapshots for flip accounting, and brute-force
//! placement checks for the hybrid scheme.

use std::collections::HashSet;

use proptest::prelude::*;

use pcmtree::addressing::{null_word, Origin, Ratio, Scheme, Threshold};
use pcmtree::avl::{AvlTree, NodeId, RotationDirection, RotationStep};
use pcmtree::harness::{gen_dataset, run_trial, ReassignMode, TrialSession, TrialSpec};
use pcmtree::pcm::{AccountingConfig, FlipLedger};

fn scheme_strategy() -> impl Strategy<Value = Scheme> {
    prop_oneof![
        Just(Scheme::linear()),
        Just(Scheme::random()),
        Just(Scheme::gray()),
        Just(Scheme::dfat_gray()),
        (1u32..=4).prop_map(|n| Scheme::hart(Ratio::new(n, 4))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn avl_matches_sorted_model(keys in proptest::collection::vec(-500i64..500, 1..300)) {
        let mut tree = AvlTree::new();
        let mut model: Vec<i64> = Vec::new();
        for k in keys {
            let expected_dup = model.binary_search(&k);
            match (tree.insert(k), expected_dup) {
                (Ok(events), Err(pos)) => {
                    model.insert(pos, k);
                    prop_assert!(events.len() <= 2);
                    let doubles = events.iter().filter(|e| e.step != RotationStep::Single).count();
                    prop_assert!(doubles == 0 || doubles == 2);
                }
                (Err(_), Ok(_)) => {}
                (got, want) => prop_assert!(false, "insert {k}: {got:?} vs model {want:?}"),
            }
            prop_assert!(tree.validate().is_ok());
        }
        prop_assert_eq!(tree.in_order_keys(), model.clone());
        let n = model.len() as f64;
        prop_assert!(f64::from(tree.height()) <= 1.4405 * (n + 2.0).log2());
        for (id, path) in tree.preorder() {
            prop_assert_eq!(tree.path_of(tree.key(id)).unwrap(), path);
            prop_assert_eq!(tree.node_at(&path), Some(id));
        }
    }

    #[test]
    fn rotation_links_are_consistent(seed in any::<u64>()) {
        let mut tree = AvlTree::new();
        for k in gen_dataset(200, seed).unwrap() {
            for ev in tree.insert(k).unwrap() {
                prop_assert_eq!(ev.links.len(), 3);
                prop_assert!(ev.pivot_level >= 1);
                prop_assert_eq!(ev.pivot_path.level(), ev.pivot_level);
                let single_dir = match ev.case {
                    pcmtree::avl::RotationCase::LL => Some(RotationDirection::Right),
                    pcmtree::avl::RotationCase::RR => Some(RotationDirection::Left),
                    _ => None,
                };
                if let Some(d) = single_dir {
                    prop_assert_eq!(ev.direction, d);
                }
            }
        }
    }

    #[test]
    fn flips_equal_snapshot_diff(scheme in scheme_strategy(), seed in any::<u64>(), acct in 0usize..3) {
        let accounting = [AccountingConfig::pointer(), AccountingConfig::relabel(), AccountingConfig::both()][acct];
        let spec = TrialSpec { accounting, verify_oracle: true, ..TrialSpec::new(8, scheme, seed) };
        let out = run_trial(&spec).unwrap();
        prop_assert_eq!(out.oracle_checks, out.ledger.total_rotations);
        prop_assert_eq!(out.ledger.flips_per_level.values().sum::<u64>(), out.ledger.total_flips);
        prop_assert_eq!(out.ledger.rotations_per_level.values().sum::<u64>(), out.ledger.total_rotations);
    }

    #[test]
    fn addresses_are_unique_and_placed(scheme in scheme_strategy(), seed in any::<u64>()) {
        let spec = TrialSpec::new(9, scheme, seed);
        let threshold = scheme.ratio.map(|r| Threshold::for_nodes(spec.num_nodes, r).unwrap());
        let mut session = TrialSession::new(&spec).unwrap();
        for k in gen_dataset(spec.num_nodes, seed).unwrap() {
            session.insert(k).unwrap();
            let tree = session.tree();
            let addressing = session.addressing();
            let mut seen = HashSet::new();
            for (id, path) in tree.preorder() {
                let a = addressing.assignment(id).unwrap();
                prop_assert!(a.address < null_word(9));
                prop_assert!(seen.insert(a.address), "address {} reused", a.address);
                prop_assert_eq!(addressing.space().owner(a.address), Some(id));
                // Hybrid partition: linear at or above the threshold level,
                // positional (or its spare-queue fallbacks) below it.
                if let Some(t) = threshold {
                    let linear = matches!(a.origin, Origin::Linear);
                    prop_assert_eq!(linear, path.level() <= t.level, "{:?} at level {}", a.origin, path.level());
                }
                if let Origin::Positional(i) = a.origin {
                    prop_assert_eq!(Some(i), addressing.positional_index(&path).ok());
                }
            }
            prop_assert_eq!(addressing.space().occupied_count(), tree.len());
        }
    }

    #[test]
    fn modes_agree(seed in any::<u64>(), quarter in 1u32..=4) {
        for scheme in [Scheme::gray(), Scheme::dfat_gray(), Scheme::hart(Ratio::new(quarter, 4))] {
            let base = TrialSpec::new(9, scheme, seed);
            let mut inc = TrialSession::new(&TrialSpec { mode: ReassignMode::Incremental, ..base }).unwrap();
            let mut full = TrialSession::new(&TrialSpec { mode: ReassignMode::FullPass, ..base }).unwrap();
            for k in gen_dataset(base.num_nodes, seed).unwrap() {
                inc.insert(k).unwrap();
                full.insert(k).unwrap();
                prop_assert_eq!(inc.addressing().addresses(), full.addressing().addresses());
                prop_assert_eq!(inc.last_writes(), full.last_writes());
            }
            prop_assert_eq!(inc.ledger(), full.ledger());
        }
    }

    #[test]
    fn ledger_merge_is_additive(seeds in proptest::collection::vec(any::<u64>(), 1..5)) {
        // Merging per-trial ledgers equals recording the concatenated event
        // streams into one ledger, in either merge order.
        let accounting = AccountingConfig::both();
        let mut merged = FlipLedger::new();
        let mut streamed = FlipLedger::new();
        let mut ledgers = Vec::new();
        for &seed in &seeds {
            let spec = TrialSpec { accounting, ..TrialSpec::new(8, Scheme::dfat_gray(), seed) };
            let mut session = TrialSession::new(&spec).unwrap();
            for k in gen_dataset(spec.num_nodes, seed).unwrap() {
                let events = session.insert(k).unwrap();
                for (ev, writes) in events.iter().zip(session.last_writes()) {
                    streamed.record_rotation(ev, writes, &accounting);
                }
            }
            merged.merge(session.ledger());
            ledgers.push(session.ledger().clone());
        }
        let mut reversed = FlipLedger::new();
        for l in ledgers.iter().rev() {
            reversed.merge(l);
        }
        prop_assert_eq!(&merged, &streamed);
        prop_assert_eq!(&merged, &reversed);
    }
}

#[test]
fn random_scheme_is_reproducible_per_seed() {
    let a = run_trial(&TrialSpec::new(10, Scheme::random(), 3)).unwrap();
    let b = run_trial(&TrialSpec::new(10, Scheme::random(), 3)).unwrap();
    let c = run_trial(&TrialSpec::new(10, Scheme::random(), 4)).unwrap();
    assert_eq!(a.ledger, b.ledger);
    assert_ne!(a.ledger, c.ledger);
}

#[test]
fn double_rotation_once_halves_double_events() {
    let spec = TrialSpec::new(10, Scheme::linear(), 9);
    let mut once = spec;
    once.accounting.count_double_rotation_once = true;
    let two = run_trial(&spec).unwrap().ledger;
    let one = run_trial(&once).unwrap().ledger;
    assert!(one.total_rotations < two.total_rotations);
    assert_eq!(one.total_flips, two.total_flips);
}

#[test]
fn node_ids_follow_insertion_order() {
    let mut tree = AvlTree::new();
    for (i, k) in [50, 10, 90, 30].into_iter().enumerate() {
        tree.insert(k).unwrap();
        assert_eq!(tree.find(k), Some(NodeId::from_index(i)));
    }
}
