//! Multicast capacity of broadcast trees, set by the deepest leaf.

use cascade_timing::apps::{cmd_tree, fig4_tree, TreeSpec};
use cascade_timing::capacity::DEFAULT_TOL;

fn main() -> cascade_timing::Result<()> {
    let binary = fig4_tree();
    let r = cmd_tree(&binary, DEFAULT_TOL)?;
    println!(
        "binary tree: depth {}, leaves {:?}, capacity {:.4}",
        r.depth, r.deepest_leaves, r.capacity
    );

    // a star has no relays at all
    let star = TreeSpec {
        q: 1,
        edges: (1..=5).map(|leaf| (0, leaf)).collect(),
    };
    println!("star: capacity {:.4}", cmd_tree(&star, DEFAULT_TOL)?.capacity);
    Ok(())
}
