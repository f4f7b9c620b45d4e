//! Tree and graph representation.
//!
//! A [`TreeTopology`] is an immutable validated tree on vertices `0..n`. It
//! caches a depth-first rooting at vertex 0 so that every per-edge quantity
//! (subtree sizes, frequency sums, partition sides) is available from a single
//! linear pass. A [`KuramotoTree`] pairs a topology with natural frequencies.

mod frequencies;
mod generate;
mod graph;

pub use frequencies::{sample_frequencies, sample_frequencies_into, FrequencyDistribution};
pub use generate::{generate_topology, prufer_decode, TopologyKind};
pub use graph::KuramotoGraph;

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

/// Orders an edge as `(min, max)`.
pub fn normalize_edge((u, v): Edge) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTopology {
    edges: Vec<Edge>,
    // CSR adjacency, neighbours ascending.
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    // DFS preorder from vertex 0, children ascending.
    preorder: Vec<usize>,
    position: Vec<usize>,
    parent: Vec<usize>,
    subtree_size: Vec<usize>,
}

impl TreeTopology {
    /// Validates `edges` as a spanning tree of `0..n`.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotATree(format!("a tree needs at least 2 vertices, got {n}")));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{n} vertices need {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut dsu = DisjointSets::new(n);
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::NotATree(format!("edge ({u}, {v}) has a vertex out of range 0..{n}")));
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at vertex {u}")));
            }
            if !dsu.union(u, v) {
                return Err(Error::NotATree(format!("edge ({u}, {v}) closes a cycle")));
            }
        }
        // n - 1 acyclic edges on n vertices: connected.

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0usize; 2 * (n - 1)];
        for &(u, v) in &edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        let mut topo = TreeTopology {
            edges,
            offsets,
            neighbors,
            preorder: Vec::new(),
            position: Vec::new(),
            parent: Vec::new(),
            subtree_size: Vec::new(),
        };
        let (preorder, parent) = topo.dfs_with_parents(0);
        let mut position = vec![0usize; n];
        for (i, &v) in preorder.iter().enumerate() {
            position[v] = i;
        }
        let mut subtree_size = vec![1usize; n];
        for &v in preorder.iter().skip(1).rev() {
            subtree_size[parent[v]] += subtree_size[v];
        }
        topo.preorder = preorder;
        topo.position = position;
        topo.parent = parent;
        topo.subtree_size = subtree_size;
        Ok(topo)
    }

    pub fn n(&self) -> usize {
        self.preorder.len()
    }

    /// Edges in construction order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Preorder of the DFS rooted at vertex 0.
    pub(crate) fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// Parent of each vertex when rooted at 0 (`parent[0] == 0`).
    pub(crate) fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// The endpoint of `edge` that lies below the other when rooted at 0.
    pub(crate) fn child_of(&self, (u, v): Edge) -> usize {
        if self.parent[v] == u && v != 0 {
            v
        } else {
            u
        }
    }

    fn dfs_with_parents(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.offsets.len() - 1;
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            // Reverse push so the smallest child is visited first.
            for &w in self.neighbors(v).iter().rev() {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        (order, parent)
    }

    /// Depth-first visiting order from `root`, children in ascending index
    /// order. Entry `i` is the vertex that receives DFS index `i`; every
    /// subtree occupies a contiguous block of positions.
    pub fn dfs_order(&self, root: usize) -> Result<Vec<usize>> {
        if root >= self.n() {
            return Err(Error::BadParameters(format!("root {root} out of range 0..{}", self.n())));
        }
        if root == 0 {
            return Ok(self.preorder.clone());
        }
        Ok(self.dfs_with_parents(root).0)
    }

    /// One entry per edge, in edge-list order.
    pub fn edge_partitions(&self) -> Vec<EdgePartition> {
        let n = self.n();
        self.edges
            .iter()
            .map(|&edge| {
                let c = self.child_of(edge);
                let size = self.subtree_size[c];
                let start = self.position[c];
                let below = &self.preorder[start..start + size];
                let side = if 2 * size <= n {
                    let mut s = below.to_vec();
                    s.sort_unstable();
                    s
                } else {
                    let mut s: Vec<usize> = self.preorder[..start]
                        .iter()
                        .chain(&self.preorder[start + size..])
                        .copied()
                        .collect();
                    s.sort_unstable();
                    s
                };
                EdgePartition {
                    edge,
                    size: side.len(),
                    side,
                }
            })
            .collect()
    }

    /// Smaller-side size for each edge, in edge-list order.
    pub fn partition_sizes(&self) -> Vec<usize> {
        let n = self.n();
        self.edges
            .iter()
            .map(|&e| {
                let s = self.subtree_size[self.child_of(e)];
                s.min(n - s)
            })
            .collect()
    }

    /// Maximum partition size: the largest smaller-side component over all edges.
    pub fn max_partition_size(&self) -> usize {
        self.partition_sizes().into_iter().max().unwrap_or(0)
    }

    /// Number of edges on a longest path (double breadth-first search).
    pub fn diameter(&self) -> usize {
        let (far, _) = self.farthest_from(0);
        self.farthest_from(far).1
    }

    fn farthest_from(&self, start: usize) -> (usize, usize) {
        let mut dist = vec![usize::MAX; self.n()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut best = (start, 0);
        while let Some(v) = queue.pop_front() {
            if dist[v] > best.1 {
                best = (v, dist[v]);
            }
            for &w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best
    }

    /// Depth of the deepest vertex when rooted at `root`.
    pub fn height(&self, root: usize) -> usize {
        self.farthest_from(root).1
    }
}

/// The smaller component of `T - edge`. At an exact tie the component not
/// containing vertex 0 is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgePartition {
    pub edge: Edge,
    /// Sorted vertex indices of the component.
    pub side: Vec<usize>,
    pub size: usize,
}

/// A tree with a natural frequency at every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct KuramotoTree {
    topology: TreeTopology,
    freqs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl KuramotoTree {
    pub fn new(n: usize, edges: Vec<Edge>, freqs: Vec<f64>) -> Result<Self> {
        if freqs.len() != n {
            return Err(Error::LengthMismatch {
                what: "frequencies",
                expected: n,
                found: freqs.len(),
            });
        }
        let topology = TreeTopology::new(n, edges)?;
        Self::from_topology(topology, freqs)
    }

    pub fn from_topology(topology: TreeTopology, freqs: Vec<f64>) -> Result<Self> {
        if freqs.len() != topology.n() {
            return Err(Error::LengthMismatch {
                what: "frequencies",
                expected: topology.n(),
                found: freqs.len(),
            });
        }
        if let Some(index) = freqs.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteFrequency { index });
        }
        Ok(KuramotoTree {
            topology,
            freqs,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                what: "labels",
                expected: self.n(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same topology and labels with a new frequency vector.
    pub fn with_freqs(&self, freqs: Vec<f64>) -> Result<Self> {
        let mut t = Self::from_topology(self.topology.clone(), freqs)?;
        t.labels = self.labels.clone();
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn edges(&self) -> &[Edge] {
        self.topology.edges()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn mean_frequency(&self) -> f64 {
        mean(&self.freqs)
    }

    pub fn edge_partitions(&self) -> Vec<EdgePartition> {
        self.topology.edge_partitions()
    }

    pub fn diameter(&self) -> usize {
        self.topology.diameter()
    }

    pub fn max_partition_size(&self) -> usize {
        self.topology.max_partition_size()
    }

    pub fn dfs_order(&self, root: usize) -> Result<Vec<usize>> {
        self.topology.dfs_order(root)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    crate::numeric::sum(xs.iter().copied()) / xs.len() as f64
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> TreeTopology {
        TreeTopology::new(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
    }

    #[test]
    fn smallest_tree() {
        let t = KuramotoTree::new(2, vec![(0, 1)], vec![0.0, 1.0]).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.mean_frequency(), 0.5);
    }

    #[test]
    fn rejects_cycle() {
        let err = KuramotoTree::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![0.0; 3]).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
        let err = TreeTopology::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
        // right edge count but a cycle plus an isolated vertex
        let err = TreeTopology::new(4, vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
    }

    #[test]
    fn rejects_disconnected() {
        let err = KuramotoTree::new(4, vec![(0, 1), (2, 3)], vec![0.0; 4]).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
        let err = TreeTopology::new(4, vec![(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
    }

    #[test]
    fn rejects_bad_frequencies() {
        let err = KuramotoTree::new(2, vec![(0, 1)], vec![0.0]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
        let err = KuramotoTree::new(2, vec![(0, 1)], vec![0.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFiniteFrequency { index: 1 });
        let err = KuramotoTree::new(2, vec![(0, 1)], vec![f64::INFINITY, 0.0]).unwrap_err();
        assert_eq!(err, Error::NonFiniteFrequency { index: 0 });
    }

    #[test]
    fn rejects_self_loop_and_range() {
        assert!(TreeTopology::new(2, vec![(1, 1)]).is_err());
        assert!(TreeTopology::new(2, vec![(0, 2)]).is_err());
        assert!(TreeTopology::new(1, vec![]).is_err());
    }

    #[test]
    fn chain_partitions() {
        let t = chain(3);
        let sizes: Vec<usize> = t.edge_partitions().iter().map(|p| p.size).collect();
        assert_eq!(sizes, vec![1, 1]);
        let parts = t.edge_partitions();
        assert_eq!(parts[0].side, vec![0]);
        assert_eq!(parts[1].side, vec![2]);
    }

    #[test]
    fn star_partitions() {
        let t = TreeTopology::new(5, (1..5).map(|i| (0, i)).collect()).unwrap();
        let parts = t.edge_partitions();
        assert_eq!(parts.len(), 4);
        for (i, p) in parts.iter().enumerate() {
            assert_eq!(p.side, vec![i + 1]);
        }
    }

    #[test]
    fn tie_picks_side_without_vertex_zero() {
        let t = chain(4);
        let parts = t.edge_partitions();
        assert_eq!(parts[1].side, vec![2, 3]);
        // same tree, vertex 0 in the middle
        let t = TreeTopology::new(4, vec![(1, 0), (0, 2), (2, 3)]).unwrap();
        assert_eq!(t.edge_partitions()[1].side, vec![2, 3]);
    }

    #[test]
    fn diameters() {
        assert_eq!(chain(60).diameter(), 59);
        let star = TreeTopology::new(60, (1..60).map(|i| (0, i)).collect()).unwrap();
        assert_eq!(star.diameter(), 2);
        assert_eq!(chain(2).diameter(), 1);
    }

    #[test]
    fn dfs_order_on_chain_from_end() {
        assert_eq!(chain(5).dfs_order(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(chain(5).dfs_order(4).unwrap(), vec![4, 3, 2, 1, 0]);
        assert!(chain(5).dfs_order(5).is_err());
    }

    #[test]
    fn dfs_children_ascending() {
        let t = TreeTopology::new(5, vec![(0, 4), (0, 2), (2, 3), (0, 1)]).unwrap();
        assert_eq!(t.dfs_order(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(t.dfs_order(3).unwrap(), vec![3, 2, 0, 1, 4]);
    }
}
