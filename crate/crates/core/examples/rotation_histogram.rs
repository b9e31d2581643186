//! Average rotations per tree level, printed as a bar chart.
//!
//! Run with `cargo run --release --example rotation_histogram`.

use pcmtree::harness::rotations_histogram;

fn main() {
    for width in [8, 12] {
        let h = rotations_histogram(width, 100, 0, 4).unwrap();
        let (peak_level, peak) = h.peak().unwrap();
        println!("width {width}: peak {peak:.2} at level {peak_level}");
        for (level, mean) in &h.counts {
            let bar = "#".repeat((mean / peak * 50.0).round() as usize);
            println!("  {level:>2} {mean:>8.2} {bar}");
        }
    }
}
