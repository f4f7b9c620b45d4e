use std::collections::HashSet;

use super::{normalize_edge, Edge, KuramotoTree};
use crate::error::{Error, Result};

/// A connected simple graph with natural frequencies; cycles allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct KuramotoGraph {
    edges: Vec<Edge>,
    freqs: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
}

impl KuramotoGraph {
    pub fn new(n: usize, edges: Vec<Edge>, freqs: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!("need at least 2 vertices, got {n}")));
        }
        if freqs.len() != n {
            return Err(Error::LengthMismatch {
                what: "frequencies",
                expected: n,
                found: freqs.len(),
            });
        }
        if let Some(index) = freqs.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteFrequency { index });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !seen.insert(normalize_edge((u, v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let g = KuramotoGraph {
            edges,
            freqs,
            adjacency,
        };
        if g.reachable_from(0, None, None).len() != n {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(g)
    }

    pub fn from_tree(tree: &KuramotoTree) -> Self {
        Self::new(tree.n(), tree.edges().to_vec(), tree.freqs().to_vec()).expect("a tree is a connected simple graph")
    }

    pub fn n(&self) -> usize {
        self.freqs.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn mean_frequency(&self) -> f64 {
        super::mean(&self.freqs)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n()
    }

    pub fn to_tree(&self) -> Result<KuramotoTree> {
        KuramotoTree::new(self.n(), self.edges.clone(), self.freqs.clone())
    }

    pub fn has_edge(&self, (u, v): Edge) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Vertices reachable from `start` avoiding `skip_vertex` and `skip_edge`.
    pub(crate) fn reachable_from(&self, start: usize, skip_vertex: Option<usize>, skip_edge: Option<Edge>) -> Vec<usize> {
        let skip_edge = skip_edge.map(normalize_edge);
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        if let Some(s) = skip_vertex {
            seen[s] = true;
        }
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] && skip_edge != Some(normalize_edge((v, w))) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components of `G - v`, each sorted, ordered by smallest vertex.
    pub fn components_without(&self, v: usize) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n()];
        assigned[v] = true;
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if !assigned[s] {
                let c = self.reachable_from(s, Some(v), None);
                c.iter().for_each(|&x| assigned[x] = true);
                comps.push(c);
            }
        }
        comps
    }

    /// Some cut-vertex, if the graph has one.
    pub fn find_cut_vertex(&self) -> Option<usize> {
        (0..self.n()).find(|&v| self.adjacency[v].len() >= 2 && self.components_without(v).len() >= 2)
    }
}
