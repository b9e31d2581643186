//! Gray codes and depth-first alternating ranks of tree positions.
//!
//! Run with `cargo run --example gray_and_dfat`.

use pcmtree::addressing::{binary_to_gray, dfat_index, gray_to_binary};
use pcmtree::avl::{Side, TreePath};

fn main() {
    println!("k  gray  back");
    for k in 0..8 {
        let g = binary_to_gray(k, 3).unwrap();
        println!("{k}  {g:03b}   {}", gray_to_binary(g, 3).unwrap());
    }

    // Every position of a three-level tree, ranked with room for three levels.
    let positions: [&[Side]; 7] = [
        &[],
        &[Side::Left],
        &[Side::Left, Side::Left],
        &[Side::Left, Side::Right],
        &[Side::Right],
        &[Side::Right, Side::Left],
        &[Side::Right, Side::Right],
    ];
    println!("\npath  rank  address");
    for steps in positions {
        let path = TreePath::from_steps(steps);
        let rank = dfat_index(&path, 3).unwrap();
        println!(
            "{:<5} {rank:>4}  {:05b}",
            path.to_string(),
            binary_to_gray(rank, 5).unwrap()
        );
    }
}
