//! Sweeps the hybrid threshold ratio on trees of 4095 nodes.
//!
//! Run with `cargo run --release --example threshold_comparison`.

use pcmtree::harness::{compare_thresholds, CompareOptions};

fn main() {
    let options = CompareOptions {
        trials: 20,
        jobs: 4,
        ..CompareOptions::default()
    };
    for (ratio, c) in compare_thresholds(4095, &options).unwrap() {
        println!(
            "ratio {ratio}: H={} T={} width {} flips/rotation {:.3} time {:?}",
            c.threshold.height,
            c.threshold.level,
            c.width,
            c.mean_flips_per_rotation.unwrap_or(f64::NAN),
            c.wall_time
        );
    }
}
