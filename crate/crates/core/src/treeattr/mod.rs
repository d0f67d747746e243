//! Path attractors on edge-labeled rooted trees: verification, greedy
//! approximation through set cover, an exact solver and the set-cover gadget.

mod cover;
mod exact;
mod setcover;
mod tree;
mod trie;

pub use cover::{
    bruteforce_path_attractor, greedy_factor, greedy_path_attractor, greedy_string_attractor,
    verify_path_attractor, CoverGraph, PathAttractor, PathVerification, PathWitness,
};
pub use setcover::{tree_from_setcover, SetCoverInstance, SET_COVER_BRUTE_MAX};
pub use tree::LabeledTree;
pub use trie::{ReversedPathTrie, TrieEdge};
