//! Multicast over a broadcast tree of half-duplex relays.
//!
//! Every root-to-leaf path is a cascade and the deepest one is the
//! bottleneck, so the multicast capacity is that of a cascade with as many
//! hops as the deepest leaf is deep.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::capacity::{solve_capacity, CapacityResult};
use crate::error::{Error, Result};

/// A rooted tree given by its directed edges `(parent, child)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub q: u32,
    pub edges: Vec<(u32, u32)>,
}

/// A binary broadcast tree with root 1, relays 2, 3, 5, 6 and leaves 4, 7, 8.
pub fn fig4_tree() -> TreeSpec {
    TreeSpec {
        q: 1,
        edges: vec![(1, 2), (1, 3), (2, 4), (3, 5), (3, 6), (5, 7), (6, 8)],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeReport {
    pub root: u32,
    /// Hops from the root to the deepest leaf.
    pub depth: usize,
    pub deepest_leaves: Vec<u32>,
    pub relays: Vec<u32>,
    pub capacity: f64,
}

impl TreeSpec {
    /// Checks the tree shape and returns the root with each node's depth.
    pub fn depths(&self) -> Result<(u32, BTreeMap<u32, usize>)> {
        if self.q < 1 {
            return Err(Error::InvalidTree("q must be at least 1".into()));
        }
        if self.edges.is_empty() {
            return Err(Error::InvalidTree("a tree needs at least one edge".into()));
        }
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at node {a}")));
            }
            if parent.insert(b, a).is_some() {
                return Err(Error::InvalidTree(format!("node {b} has two parents")));
            }
            nodes.insert(a);
            nodes.insert(b);
        }
        let roots: Vec<u32> = nodes.iter().copied().filter(|v| !parent.contains_key(v)).collect();
        let [root] = roots[..] else {
            return Err(Error::InvalidTree(format!(
                "expected exactly one root, found {roots:?}"
            )));
        };
        let mut children: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            children.entry(a).or_default().push(b);
        }
        let mut depth = BTreeMap::from([(root, 0usize)]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &c in children.get(&v).into_iter().flatten() {
                depth.insert(c, depth[&v] + 1);
                stack.push(c);
            }
        }
        if depth.len() != nodes.len() {
            return Err(Error::InvalidTree(
                "some nodes are not reachable from the root (cycle)".into(),
            ));
        }
        Ok((root, depth))
    }
}

/// Multicast capacity of `tree`: the capacity of its longest root-to-leaf path.
pub fn cmd_tree(tree: &TreeSpec, tol: f64) -> Result<TreeReport> {
    let (root, depth) = tree.depths()?;
    let max = depth.values().copied().max().unwrap_or(0);
    let parents: BTreeSet<u32> = tree.edges.iter().map(|e| e.0).collect();
    let CapacityResult { value, .. } = solve_capacity(max, tree.q, tol)?;
    Ok(TreeReport {
        root,
        depth: max,
        deepest_leaves: depth.iter().filter(|(_, &d)| d == max).map(|(&v, _)| v).collect(),
        relays: parents.into_iter().filter(|&v| v != root).collect(),
        capacity: value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::DEFAULT_TOL;

    #[test]
    fn binary_tree() {
        let r = cmd_tree(&fig4_tree(), DEFAULT_TOL).unwrap();
        assert_eq!(r.root, 1);
        assert_eq!(r.depth, 3);
        assert_eq!(r.deepest_leaves, [7, 8]);
        assert_eq!(r.relays, [2, 3, 5, 6]);
        assert!((r.capacity - 0.7324).abs() < 1e-4);
    }

    #[test]
    fn small_trees() {
        let edge = TreeSpec {
            q: 3,
            edges: vec![(0, 1)],
        };
        assert_eq!(cmd_tree(&edge, DEFAULT_TOL).unwrap().capacity, 2.0);
        let path = TreeSpec {
            q: 2,
            edges: vec![(0, 1), (1, 2)],
        };
        assert!((cmd_tree(&path, DEFAULT_TOL).unwrap().capacity - 1.1389).abs() < 1e-4);
    }

    #[test]
    fn malformed() {
        let bad = |edges: Vec<(u32, u32)>| TreeSpec { q: 1, edges }.depths().is_err();
        assert!(bad(vec![]));
        assert!(bad(vec![(1, 1)]));
        assert!(bad(vec![(1, 2), (3, 2)]));
        assert!(bad(vec![(1, 2), (3, 4)]));
        assert!(bad(vec![(1, 2), (2, 3), (3, 2)]));
        assert!(bad(vec![(1, 2), (3, 4), (4, 5), (5, 3)]));
        assert!(TreeSpec {
            q: 0,
            edges: vec![(0, 1)]
        }
        .depths()
        .is_err());
    }
}
