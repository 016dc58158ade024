//! Network examples built on the cascade results.

pub mod butterfly;
pub mod tree;

pub use butterfly::{cmd_butterfly, network_coding_round, ButterflyReport};
pub use tree::{cmd_tree, fig4_tree, TreeReport, TreeSpec};
