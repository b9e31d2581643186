//! Address allocation for AVL trees stored in phase-change memory.
//!
//! Every tree node lives at a fixed-width address, and every child pointer
//! stores one. When a rotation rewires the tree, the rewritten pointer words
//! (and any node that has to move to a new address) cost bit flips. This
//! crate models five address-allocation schemes, counts those flips exactly,
//! and runs seeded experiments comparing them.
//!
//! - [`avl`]: the tree, with rotation events exposed through an observer.
//! - [`addressing`]: Gray/DFAT encodings, the address space and the schemes.
//! - [`pcm`]: word writes, Hamming accounting and a snapshot oracle.
//! - [`harness`]: trials, experiments, threshold sweeps and histograms.
//! - [`report`]: CSV/JSON rows.
//! - [`cli`]: the `pcmtree` command line.

pub mod addressing;
pub mod avl;
pub mod cli;
pub mod harness;
pub mod pcm;
pub mod report;
