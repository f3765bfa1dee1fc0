//! Bit-exact equivalence between the message-passing decoder on the
//! isolated-stabilizer gadget and the computation-tree recursions.
//!
//! Any divergence in update rules, sign conventions, accumulation order or
//! clipping shows up here as a hard inequality.

mod common;

use common::{all_splits, check_equivalence};
use mspi_core::recursion::PiSide;

const ITERATIONS: usize = 20;

#[test]
fn plain_ms_matches_recursions_per_edge() {
    for w in [4usize, 6, 8, 10, 12] {
        for (f, g) in all_splits(w) {
            check_equivalence(w, f, g, 1.0, None, ITERATIONS).unwrap();
        }
    }
}

#[test]
fn normalized_ms_matches_recursions_per_edge() {
    for w in [4usize, 6, 8, 10, 12] {
        for (f, g) in all_splits(w) {
            check_equivalence(w, f, g, 0.875, None, ITERATIONS).unwrap();
        }
    }
}

#[test]
fn mspi_yellow_matches_recursions_per_edge() {
    for w in [4usize, 6, 8, 10, 12] {
        for (f, g) in all_splits(w) {
            check_equivalence(w, f, g, 1.0, Some(PiSide::Yellow), ITERATIONS).unwrap();
            check_equivalence(w, f, g, 0.875, Some(PiSide::Yellow), ITERATIONS).unwrap();
        }
    }
}

#[test]
fn mspi_green_matches_recursions_per_edge() {
    for w in [4usize, 6, 8, 10, 12] {
        for (f, g) in all_splits(w) {
            check_equivalence(w, f, g, 0.875, Some(PiSide::Green), ITERATIONS).unwrap();
        }
    }
}
