//! Counts the bit flips of each rotation under linear and DFAT-Gray
//! addressing. The session cross-checks every rotation against a full
//! before/after memory snapshot and fails on any disagreement.
//!
//! Run with `cargo run --example flip_accounting`.

use pcmtree::addressing::Scheme;
use pcmtree::harness::{TrialSession, TrialSpec};
use pcmtree::pcm::AccountingConfig;

fn main() {
    for scheme in [Scheme::linear(), Scheme::dfat_gray()] {
        println!("{scheme}");
        let spec = TrialSpec {
            num_nodes: 6,
            accounting: AccountingConfig::both(),
            verify_oracle: true,
            ..TrialSpec::new(5, scheme, 0)
        };
        let mut session = TrialSession::new(&spec).unwrap();
        for key in [10, 20, 30, 25, 28, 5] {
            let events = session.insert(key).unwrap();
            for (event, writes) in events.iter().zip(session.last_writes()) {
                println!("  {:?} {:?} at level {}", event.case, event.step, event.pivot_level);
                for w in writes {
                    println!(
                        "    {:?}: {:05b} -> {:05b} ({} flips)",
                        w.location,
                        w.old,
                        w.new,
                        w.flips()
                    );
                }
            }
        }
        let ledger = session.ledger();
        println!(
            "  {} flips over {} rotations ({} snapshot checks)",
            ledger.total_flips,
            ledger.total_rotations,
            session.oracle_checks()
        );
    }
}
