//! Arena storage for binary search trees.
//!
//! Two usage patterns share one representation: full trees of a fixed depth
//! built up front (level order, so parent/child indices are predictable), and
//! trees grown one expansion at a time from a bare root. Nodes hold visit
//! statistics and a cached bound value; the search engines own all bound
//! semantics.

use crate::error::{Error, Result};

/// Index of a node in a [`TreeIndex`] arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Per-node visit statistics plus the cached bound value.
///
/// `reward_sum` accumulates raw rewards; the empirical mean is computed on
/// read so repeated updates cannot drift. A node with zero visits always
/// carries a `+inf` cached bound.
#[derive(Debug, Clone)]
pub struct NodeRecord {
    pub depth: u32,
    pub visits: u64,
    pub reward_sum: f64,
    pub cached_bound: f64,
    pub parent: Option<NodeId>,
    pub children: Option<(NodeId, NodeId)>,
}

impl NodeRecord {
    fn new(depth: u32, parent: Option<NodeId>) -> Self {
        NodeRecord {
            depth,
            visits: 0,
            reward_sum: 0.0,
            cached_bound: f64::INFINITY,
            parent,
            children: None,
        }
    }

    /// Empirical mean of the rewards seen through this node (0 when unvisited).
    #[inline]
    pub fn mean(&self) -> f64 {
        if self.visits == 0 {
            0.0
        } else {
            self.reward_sum / self.visits as f64
        }
    }

    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// Maximum supported fixed-tree depth: `2^(D+1) - 1` must fit the `u32` arena
/// index.
pub const MAX_DEPTH: u32 = 30;

/// Arena-allocated binary tree with per-node statistics.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    nodes: Vec<NodeRecord>,
    depth_limit: Option<u32>,
}

impl TreeIndex {
    /// Build a full binary tree of the given depth in level order.
    ///
    /// Node `k` has children `2k+1` and `2k+2`; leaf `j` (left to right)
    /// lives at arena index `2^D - 1 + j`. All nodes start unvisited with a
    /// `+inf` cached bound.
    pub fn full(depth: u32) -> Result<TreeIndex> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::InvalidDepth(depth));
        }
        let node_count = (1usize << (depth + 1)) - 1;
        let first_leaf = (1usize << depth) - 1;
        let mut nodes = Vec::with_capacity(node_count);
        for k in 0..node_count {
            let parent = if k == 0 {
                None
            } else {
                Some(NodeId(((k - 1) / 2) as u32))
            };
            let d = (usize::BITS - 1 - (k + 1).leading_zeros()) as u32;
            let mut rec = NodeRecord::new(d, parent);
            if k < first_leaf {
                rec.children = Some((NodeId((2 * k + 1) as u32), NodeId((2 * k + 2) as u32)));
            }
            nodes.push(rec);
        }
        Ok(TreeIndex {
            nodes,
            depth_limit: Some(depth),
        })
    }

    /// A tree holding only an unvisited root, ready for incremental growth.
    pub fn sapling() -> TreeIndex {
        TreeIndex {
            nodes: vec![NodeRecord::new(0, None)],
            depth_limit: None,
        }
    }

    /// Fixed depth of a full tree; `None` for grown trees.
    #[inline]
    pub fn depth_limit(&self) -> Option<u32> {
        self.depth_limit
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of leaves in a full tree.
    pub fn leaf_count(&self) -> u64 {
        match self.depth_limit {
            Some(d) => 1u64 << d,
            None => self.nodes.iter().filter(|n| n.is_leaf()).count() as u64,
        }
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id.index()]
    }

    #[inline]
    pub fn node_mut(&mut self, id: NodeId) -> &mut NodeRecord {
        &mut self.nodes[id.index()]
    }

    #[inline]
    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    /// Arena index of leaf `j` in a full tree.
    #[inline]
    pub fn leaf_node(&self, leaf: u64) -> NodeId {
        let d = self.depth_limit.expect("leaf_node requires a full tree");
        debug_assert!(leaf < (1u64 << d));
        NodeId(((1u64 << d) - 1 + leaf) as u32)
    }

    /// Leaf ordinal of a full-tree leaf node.
    #[inline]
    pub fn leaf_ordinal(&self, id: NodeId) -> u64 {
        let d = self.depth_limit.expect("leaf_ordinal requires a full tree");
        id.0 as u64 - ((1u64 << d) - 1)
    }

    /// Visit counts of all leaves of a full tree, in leaf order.
    pub fn leaf_visits(&self) -> Vec<u64> {
        let d = self.depth_limit.expect("leaf_visits requires a full tree");
        let first = (1usize << d) - 1;
        self.nodes[first..].iter().map(|n| n.visits).collect()
    }

    /// Visit counts of every node, arena-indexed.
    pub fn node_visits(&self) -> Vec<u64> {
        self.nodes.iter().map(|n| n.visits).collect()
    }

    /// Record one trajectory: add `reward` and one visit to every node on
    /// `path`, which must be a connected chain from the root to a leaf.
    /// Cached bounds along the path are invalidated; callers refresh them
    /// before the next read.
    pub fn record_visit(&mut self, path: &[NodeId], reward: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        if path.is_empty() || path[0] != NodeId::ROOT {
            return Err(Error::DisconnectedPath);
        }
        for pair in path.windows(2) {
            match self.nodes[pair[0].index()].children {
                Some((l, r)) if pair[1] == l || pair[1] == r => {}
                _ => return Err(Error::DisconnectedPath),
            }
        }
        let last = *path.last().unwrap();
        if !self.nodes[last.index()].is_leaf() {
            return Err(Error::DisconnectedPath);
        }
        for &id in path {
            let rec = &mut self.nodes[id.index()];
            rec.visits += 1;
            rec.reward_sum += reward;
            rec.cached_bound = f64::NAN; // stale until the engine refreshes it
        }
        Ok(())
    }

    /// Turn a leaf into an internal node with two fresh children.
    ///
    /// Returns the new `(left, right)` ids. Used by the growing engine; the
    /// caller is responsible for seeding the children's statistics.
    pub fn add_children(&mut self, id: NodeId) -> (NodeId, NodeId) {
        assert!(
            self.nodes[id.index()].is_leaf(),
            "add_children on an internal node"
        );
        let depth = self.nodes[id.index()].depth + 1;
        let left = NodeId(self.nodes.len() as u32);
        let right = NodeId(self.nodes.len() as u32 + 1);
        self.nodes.push(NodeRecord::new(depth, Some(id)));
        self.nodes.push(NodeRecord::new(depth, Some(id)));
        self.nodes[id.index()].children = Some((left, right));
        (left, right)
    }

    /// Path of node ids from the root to `id`, inclusive.
    pub fn path_to(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur.index()].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Center and halfwidth of the sub-interval of `[0, 1]` owned by leaf `j`
/// when the domain is split into `2^D` equal cells.
pub fn leaf_index_to_interval(leaf: u64, depth: u32) -> Result<(f64, f64)> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::InvalidDepth(depth));
    }
    let cells = 1u64 << depth;
    if leaf >= cells {
        return Err(Error::LeafOutOfRange { leaf, depth });
    }
    let center = (leaf as f64 + 0.5) / cells as f64;
    let halfwidth = 0.5 / cells as f64;
    Ok((center, halfwidth))
}
