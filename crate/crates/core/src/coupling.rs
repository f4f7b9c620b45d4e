//! Closed-form critical coupling of Kuramoto trees.
//!
//! Removing a tree edge `e` splits the tree into two components; the
//! partition sum of either component is the absolute value of its summed
//! frequency deviations from the mean, and the critical coupling is the
//! largest partition sum over all edges. A single rooted pass accumulating
//! subtree deviation sums produces every partition sum in `O(n)`.
//!
//! The same quantity arises from splitting a general graph at cut-vertices
//! with adjusted frequencies at the duplicated vertex; [`cut_vertex_reduce`]
//! and [`cut_edge_lower_bound`] implement those reductions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{sum, CompensatedSum};
use crate::tree::{normalize_edge, Edge, EdgePartition, KuramotoGraph, KuramotoTree, TreeTopology};

/// Above this many vertices subtree sums are carried with compensation.
const COMPENSATE_ABOVE: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeOmega {
    pub edge: Edge,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub k_c: f64,
    pub argmax_edge: Edge,
    /// Partition sum per edge, in the tree's edge order; edges are `(min, max)`.
    pub edge_omegas: Vec<EdgeOmega>,
    pub diameter: usize,
    pub max_partition: usize,
}

impl CouplingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `|Σ_{i ∈ side} (ω_i − ω̄)|` for one edge partition.
pub fn partition_sum(tree: &KuramotoTree, part: &EdgePartition) -> f64 {
    let mean = tree.mean_frequency();
    let w = tree.freqs();
    sum(part.side.iter().map(|&i| w[i] - mean)).abs()
}

/// Reusable scratch space for repeated evaluations on one topology.
#[derive(Debug, Default, Clone)]
pub struct CouplingScratch {
    sums: Vec<f64>,
    comp: Vec<CompensatedSum>,
}

impl CouplingScratch {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Subtree deviation sums rooted at vertex 0; entry `v` is the signed
/// deviation sum of the component below the edge `(parent(v), v)`.
fn subtree_deviations<'s>(topo: &TreeTopology, freqs: &[f64], scratch: &'s mut CouplingScratch) -> &'s [f64] {
    let n = topo.n();
    debug_assert_eq!(freqs.len(), n);
    let parent = topo.parents();
    let order = topo.preorder();
    scratch.sums.resize(n, 0.0);
    if n > COMPENSATE_ABOVE {
        let mean = sum(freqs.iter().copied()) / n as f64;
        scratch.comp.clear();
        scratch.comp.extend(freqs.iter().map(|&w| {
            let mut c = CompensatedSum::default();
            c.add(w - mean);
            c
        }));
        for &v in order[1..].iter().rev() {
            let c = scratch.comp[v];
            scratch.comp[parent[v]].merge(c);
        }
        for (s, c) in scratch.sums.iter_mut().zip(&scratch.comp) {
            *s = c.value();
        }
    } else {
        let mean = freqs.iter().sum::<f64>() / n as f64;
        for (s, &w) in scratch.sums.iter_mut().zip(freqs) {
            *s = w - mean;
        }
        for &v in order[1..].iter().rev() {
            let s = scratch.sums[v];
            scratch.sums[parent[v]] += s;
        }
    }
    &scratch.sums
}

/// Critical coupling only; the hot path for Monte Carlo campaigns.
pub fn critical_coupling_value(topo: &TreeTopology, freqs: &[f64], scratch: &mut CouplingScratch) -> f64 {
    let sums = subtree_deviations(topo, freqs, scratch);
    // every non-root vertex owns exactly one edge, to its parent
    sums[1..].iter().fold(0.0f64, |m, s| m.max(s.abs()))
}

/// Full report: `k_c`, the maximizing edge and every partition sum.
pub fn critical_coupling(tree: &KuramotoTree) -> CouplingReport {
    let topo = tree.topology();
    let mut scratch = CouplingScratch::new();
    let sums = subtree_deviations(topo, tree.freqs(), &mut scratch);
    let edge_omegas: Vec<EdgeOmega> = topo
        .edges()
        .iter()
        .map(|&e| EdgeOmega {
            edge: normalize_edge(e),
            omega: sums[topo.child_of(e)].abs(),
        })
        .collect();
    let mut best = edge_omegas[0];
    for eo in &edge_omegas[1..] {
        if eo.omega > best.omega || (eo.omega == best.omega && eo.edge < best.edge) {
            best = *eo;
        }
    }
    CouplingReport {
        k_c: best.omega,
        argmax_edge: best.edge,
        edge_omegas,
        diameter: topo.diameter(),
        max_partition: topo.max_partition_size(),
    }
}

/// Result of splitting a graph at a cut-vertex into two graphs that share the
/// mean frequency of the original.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReduction {
    /// Keeps the complement of `side`; the cut vertex becomes `x`.
    pub g1: KuramotoGraph,
    /// Keeps `side`; the cut vertex becomes `y`.
    pub g2: KuramotoGraph,
    pub omega_x: f64,
    pub omega_y: f64,
    /// Original index of each vertex of `g1`.
    pub g1_vertices: Vec<usize>,
    /// Original index of each vertex of `g2`.
    pub g2_vertices: Vec<usize>,
}

/// Splits `g` at cut-vertex `v`. `side` must be a union of components of `G - v`.
pub fn cut_vertex_reduce(g: &KuramotoGraph, v: usize, side: &[usize]) -> Result<CutReduction> {
    let n = g.n();
    if v >= n || side.is_empty() {
        return Err(Error::NotACutVertex(v));
    }
    let mut in_side = vec![false; n];
    for &s in side {
        if s >= n || s == v || in_side[s] {
            return Err(Error::NotACutVertex(v));
        }
        in_side[s] = true;
    }
    if side.len() + 1 >= n {
        return Err(Error::NotACutVertex(v));
    }
    let crosses = g
        .edges()
        .iter()
        .any(|&(a, b)| a != v && b != v && in_side[a] != in_side[b]);
    if crosses {
        return Err(Error::NotACutVertex(v));
    }

    let mean = g.mean_frequency();
    let w = g.freqs();
    let side_dev = sum((0..n).filter(|&i| in_side[i]).map(|i| w[i] - mean));
    let rest_dev = sum((0..n).filter(|&i| i != v && !in_side[i]).map(|i| w[i] - mean));
    let omega_x = w[v] + side_dev;
    let omega_y = w[v] + rest_dev;

    let g1_vertices: Vec<usize> = (0..n).filter(|&i| !in_side[i]).collect();
    let g2_vertices: Vec<usize> = (0..n).filter(|&i| i == v || in_side[i]).collect();
    let g1 = induced(g, &g1_vertices, v, omega_x)?;
    let g2 = induced(g, &g2_vertices, v, omega_y)?;
    Ok(CutReduction {
        g1,
        g2,
        omega_x,
        omega_y,
        g1_vertices,
        g2_vertices,
    })
}

fn induced(g: &KuramotoGraph, keep: &[usize], cut: usize, cut_freq: f64) -> Result<KuramotoGraph> {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &k) in keep.iter().enumerate() {
        index[k] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
        .map(|&(a, b)| (index[a], index[b]))
        .collect();
    let freqs = keep
        .iter()
        .map(|&k| if k == cut { cut_freq } else { g.freqs()[k] })
        .collect();
    KuramotoGraph::new(keep.len(), edges, freqs)
}

/// Necessary coupling across a cut-edge: any `k` admitting a frequency fixed
/// point satisfies `k >= |ω_x − ω_y| / 2`.
pub fn cut_edge_lower_bound(g: &KuramotoGraph, (u, v): Edge) -> Result<f64> {
    if !g.has_edge((u, v)) {
        return Err(Error::NotACutEdge(u, v));
    }
    let near = g.reachable_from(u, None, Some((u, v)));
    if near.binary_search(&v).is_ok() {
        return Err(Error::NotACutEdge(u, v));
    }
    let mean = g.mean_frequency();
    let w = g.freqs();
    let mut in_near = vec![false; g.n()];
    near.iter().for_each(|&i| in_near[i] = true);
    let near_dev = sum((0..g.n()).filter(|&i| in_near[i] && i != u).map(|i| w[i] - mean));
    let far_dev = sum((0..g.n()).filter(|&i| !in_near[i] && i != v).map(|i| w[i] - mean));
    let omega_x = w[u] + near_dev;
    let omega_y = w[v] + far_dev;
    Ok(0.5 * (omega_x - omega_y).abs())
}

/// Splits `g` at cut-vertices until no component has one. Trees come apart
/// into their `n − 1` edges.
pub fn reduce_to_blocks(g: &KuramotoGraph) -> Vec<KuramotoGraph> {
    let mut work = vec![g.clone()];
    let mut blocks = Vec::new();
    while let Some(h) = work.pop() {
        match h.find_cut_vertex() {
            Some(v) => {
                let comps = h.components_without(v);
                let red = cut_vertex_reduce(&h, v, &comps[0]).expect("component of G - v is a valid side");
                work.push(red.g2);
                work.push(red.g1);
            }
            None => blocks.push(h),
        }
    }
    blocks
}

/// Critical coupling of a graph whose blocks are all single edges. Any
/// 2-connected block is reported as [`Error::Irreducible`].
pub fn graph_critical_coupling(g: &KuramotoGraph) -> Result<f64> {
    let mut k_c = 0.0f64;
    for b in reduce_to_blocks(g) {
        if b.n() != 2 {
            return Err(Error::Irreducible {
                vertices: b.n(),
                edges: b.edges().len(),
            });
        }
        k_c = k_c.max(0.5 * (b.freqs()[0] - b.freqs()[1]).abs());
    }
    Ok(k_c)
}
