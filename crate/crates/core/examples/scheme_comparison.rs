//! Mean bit flips per rotation of every scheme over a few widths.
//!
//! Run with `cargo run --release --example scheme_comparison`.

use pcmtree::addressing::Ratio;
use pcmtree::harness::{paper_schemes, run_experiment, ExperimentConfig};
use pcmtree::pcm::AccountingConfig;

fn main() {
    for accounting in [AccountingConfig::pointer(), AccountingConfig::both()] {
        let mut config = ExperimentConfig::new(vec![8, 10, 12], paper_schemes(Ratio::new(1, 2)), 20);
        config.accounting = accounting;
        println!("accounting: {}", accounting.tag());
        for r in run_experiment(&config, 4).unwrap() {
            println!(
                "  width {:>2} {:<10} flips/rotation {:>6.2}  overflow {:>4}  time {:?}",
                r.width,
                r.scheme.to_string(),
                r.mean_flips_per_rotation.unwrap_or(f64::NAN),
                r.overflow_fallbacks,
                r.wall_time
            );
        }
    }
}
