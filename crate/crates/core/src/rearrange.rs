//! Frequency rearrangement bounding the critical coupling by the spread.
//!
//! Vertices are numbered in depth-first order, so every edge cuts off a
//! contiguous block of numbers. Frequencies are then ordered so that the
//! running deviation sum `f(k) = Σ_{i≤k} ω_{a_i} − k ω̄` stays inside
//! `[ω_min − ω̄, ω_max − ω̄]`: start with `ω_max`, then alternate runs of
//! below-mean frequencies (until `f ≤ 0`) and above-mean frequencies (until
//! `f ≥ 0`). Assigning the `i`-th selected frequency to the vertex with DFS
//! index `i` makes every partition sum a difference of two `f` values, hence
//! at most `ω_max − ω_min`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::coupling::{critical_coupling_value, CouplingScratch};
use crate::error::{Error, Result};
use crate::montecarlo::{sample_statistic, McEstimate};
use crate::numeric::CompensatedSum;
use crate::tree::{generate_topology, FrequencyDistribution, KuramotoTree, TopologyKind, TreeTopology};

pub const EXHAUSTIVE_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangementResult {
    /// `assignment[i]` is the original index of the frequency placed at DFS position `i`.
    pub assignment: Vec<usize>,
    /// `vertex_order[i]` is the vertex with DFS index `i`.
    pub vertex_order: Vec<usize>,
    pub k_c_before: f64,
    pub k_c_after: f64,
    /// `ω_max − ω_min`.
    pub bound: f64,
    /// `f(1), …, f(n)`.
    pub f_values: Vec<f64>,
    #[serde(skip)]
    pub tree: KuramotoTree,
}

fn mean(w: &[f64]) -> f64 {
    crate::numeric::sum(w.iter().copied()) / w.len() as f64
}

/// Order in which frequencies are laid out along the DFS numbering.
///
/// Within a run the candidate farthest from the mean is taken first, ties by
/// lower index. Values equal to the mean count as below it. Any pick order
/// keeps the spread bound.
pub fn selection_order(freqs: &[f64]) -> Vec<usize> {
    let n = freqs.len();
    if n == 0 {
        return Vec::new();
    }
    let m = mean(freqs);
    let first = (0..n)
        .max_by(|&a, &b| freqs[a].total_cmp(&freqs[b]).then(b.cmp(&a)))
        .expect("non-empty");

    let mut low: Vec<usize> = (0..n).filter(|&i| i != first && freqs[i] <= m).collect();
    let mut high: Vec<usize> = (0..n).filter(|&i| i != first && freqs[i] > m).collect();
    // popped from the back
    low.sort_by(|&a, &b| freqs[b].total_cmp(&freqs[a]).then(b.cmp(&a)));
    high.sort_by(|&a, &b| freqs[a].total_cmp(&freqs[b]).then(b.cmp(&a)));

    let mut order = Vec::with_capacity(n);
    order.push(first);
    let mut f = CompensatedSum::default();
    f.add(freqs[first] - m);
    let mut below_run = true;
    while order.len() < n {
        let (primary, fallback) = if below_run { (&mut low, &mut high) } else { (&mut high, &mut low) };
        let next = primary.pop().or_else(|| fallback.pop()).expect("candidates remain");
        order.push(next);
        f.add(freqs[next] - m);
        let fk = f.value();
        if below_run && fk <= 0.0 {
            below_run = false;
        } else if !below_run && fk >= 0.0 {
            below_run = true;
        }
    }
    order
}

/// Running deviation sums `f(1), …, f(n)` of `freqs` taken in `order`.
pub fn running_deviation(freqs: &[f64], order: &[usize]) -> Vec<f64> {
    let m = mean(freqs);
    let mut f = CompensatedSum::default();
    order
        .iter()
        .map(|&i| {
            f.add(freqs[i] - m);
            f.value()
        })
        .collect()
}

fn spread(freqs: &[f64]) -> f64 {
    let (lo, hi) = freqs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    hi - lo
}

fn place(freqs: &[f64], vertex_order: &[usize], assignment: &[usize], out: &mut [f64]) {
    for (&v, &a) in vertex_order.iter().zip(assignment) {
        out[v] = freqs[a];
    }
}

/// Rearranges `tree`'s frequencies along the DFS numbering from `root`.
pub fn rearrange(tree: &KuramotoTree, root: usize) -> Result<RearrangementResult> {
    let vertex_order = tree.dfs_order(root)?;
    let freqs = tree.freqs();
    let assignment = selection_order(freqs);
    let mut moved = vec![0.0; freqs.len()];
    place(freqs, &vertex_order, &assignment, &mut moved);
    let rearranged = tree.with_freqs(moved)?;
    let mut scratch = CouplingScratch::new();
    let k_c_before = critical_coupling_value(tree.topology(), freqs, &mut scratch);
    let k_c_after = critical_coupling_value(rearranged.topology(), rearranged.freqs(), &mut scratch);
    Ok(RearrangementResult {
        f_values: running_deviation(freqs, &assignment),
        assignment,
        vertex_order,
        k_c_before,
        k_c_after,
        bound: spread(freqs),
        tree: rearranged,
    })
}

/// Critical coupling after rearrangement, for a precomputed DFS numbering.
pub fn rearranged_coupling(topo: &TreeTopology, vertex_order: &[usize], freqs: &[f64], scratch: &mut CouplingScratch) -> f64 {
    let assignment = selection_order(freqs);
    let mut moved = vec![0.0; freqs.len()];
    place(freqs, vertex_order, &assignment, &mut moved);
    critical_coupling_value(topo, &moved, scratch)
}

/// Minimum critical coupling over all `n!` placements of the frequency
/// multiset. The returned permutation gives vertex `v` the frequency
/// `freqs[perm[v]]`; among equal minima the lexicographically first wins.
pub fn exhaustive_best(tree: &KuramotoTree) -> Result<(f64, Vec<usize>)> {
    let n = tree.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let topo = tree.topology();
    let freqs = tree.freqs();
    let better = |a: &(f64, Vec<usize>), b: &(f64, Vec<usize>)| match a.0.total_cmp(&b.0) {
        Ordering::Equal => a.1 < b.1,
        o => o == Ordering::Less,
    };
    let best = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut perm: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&i| i != first)).collect();
            let mut scratch = CouplingScratch::new();
            let mut placed = vec![0.0; n];
            let mut best: Option<(f64, Vec<usize>)> = None;
            loop {
                for (v, &p) in perm.iter().enumerate() {
                    placed[v] = freqs[p];
                }
                let k = critical_coupling_value(topo, &placed, &mut scratch);
                if best.as_ref().is_none_or(|b| k < b.0) {
                    best = Some((k, perm.clone()));
                }
                if !next_permutation(&mut perm[1..]) {
                    break;
                }
            }
            best.expect("at least one permutation")
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("n >= 2");
    Ok(best)
}

fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let Some(i) = (0..xs.len() - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..xs.len()).rev().find(|&j| xs[j] > xs[i]).expect("successor exists");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Before/after statistics of rearrangement over random frequency draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangementCampaign {
    pub before: McEstimate,
    pub after: McEstimate,
    /// Distribution of `k_c_after − (ω_max − ω_min)`; a positive maximum
    /// would be a violation of the spread bound.
    pub margin: McEstimate,
}

pub fn rearrangement_campaign(
    kind: TopologyKind,
    n: usize,
    dist: &FrequencyDistribution,
    samples: u64,
    master_seed: u64,
    root: usize,
    workers: Option<usize>,
) -> Result<RearrangementCampaign> {
    let topo = TreeTopology::new(n, generate_topology(kind, n, master_seed)?)?;
    let order = topo.dfs_order(root)?;
    let before = sample_statistic(&topo, dist, samples, master_seed, false, workers, critical_coupling_value)?;
    let after = sample_statistic(&topo, dist, samples, master_seed, true, workers, |t, w, s| {
        rearranged_coupling(t, &order, w, s)
    })?;
    let margin = sample_statistic(&topo, dist, samples, master_seed, false, workers, |t, w, s| {
        rearranged_coupling(t, &order, w, s) - spread(w)
    })?;
    Ok(RearrangementCampaign { before, after, margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(edges: &[(usize, usize)], freqs: &[f64]) -> KuramotoTree {
        KuramotoTree::new(freqs.len(), edges.to_vec(), freqs.to_vec()).unwrap()
    }

    #[test]
    fn pair_order_trace() {
        let order = selection_order(&[0.0, 1.0]);
        assert_eq!(order, vec![1, 0]);
        assert_eq!(running_deviation(&[0.0, 1.0], &order), vec![0.5, 0.0]);
    }

    #[test]
    fn starts_with_maximum() {
        let w = [0.3, 0.9, 0.1, 0.95, 0.5];
        assert_eq!(selection_order(&w)[0], 3);
    }

    #[test]
    fn equal_frequencies() {
        let t = tree(&[(0, 1), (1, 2), (1, 3)], &[0.4; 4]);
        let r = rearrange(&t, 0).unwrap();
        assert_eq!(r.k_c_after, 0.0);
        assert_eq!(r.bound, 0.0);
        let mut a = r.assignment.clone();
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_valued_star_is_tight() {
        let t = tree(&[(0, 1), (0, 2), (0, 3)], &[1.0, 1.0, 0.0, 0.0]);
        let (xi, zeta, n) = (1.0f64, 0.0f64, 4.0);
        let formula = (xi - zeta + (2.0 * zeta - 2.0 * xi) / n).abs();
        assert_eq!(formula, 0.5);
        assert!((rearrange(&t, 0).unwrap().k_c_after - formula).abs() < 1e-15);
        // every placement
        let mut perm = vec![0, 1, 2, 3];
        loop {
            let w: Vec<f64> = perm.iter().map(|&p| t.freqs()[p]).collect();
            assert!((crate::critical_coupling(&t.with_freqs(w).unwrap()).k_c - formula).abs() < 1e-15);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn chain_of_four_interleaves() {
        let t = tree(&[(0, 1), (1, 2), (2, 3)], &[0.0, 0.0, 1.0, 1.0]);
        let (best, perm) = exhaustive_best(&t).unwrap();
        assert_eq!(best, 0.5);
        let placed: Vec<f64> = perm.iter().map(|&p| t.freqs()[p]).collect();
        assert_ne!(placed[0], placed[1]);
        let r = rearrange(&t, 0).unwrap();
        assert!(best <= r.k_c_after);
        assert_eq!(r.tree.freqs(), &[1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn exhaustive_on_pair_and_limits() {
        let t = tree(&[(0, 1)], &[0.2, 1.0]);
        let (best, perm) = exhaustive_best(&t).unwrap();
        assert!((best - 0.4).abs() < 1e-15);
        let placed: Vec<f64> = perm.iter().map(|&p| t.freqs()[p]).collect();
        assert_eq!(crate::critical_coupling(&t.with_freqs(placed).unwrap()).k_c, best);
        let big = KuramotoTree::new(10, (1..10).map(|i| (i - 1, i)).collect(), vec![0.0; 10]).unwrap();
        assert_eq!(exhaustive_best(&big), Err(Error::TooLarge { n: 10, limit: 9 }));
    }

    #[test]
    fn next_permutation_counts() {
        let mut p = vec![0, 1, 2, 3, 4];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 120);
    }

    #[test]
    fn result_invariants() {
        let w = crate::sample_frequencies(&FrequencyDistribution::standard_uniform(), 15, 4);
        let t = KuramotoTree::new(15, generate_topology(TopologyKind::Binary, 15, 0).unwrap(), w.clone()).unwrap();
        let r = rearrange(&t, 0).unwrap();
        assert!(r.k_c_after <= r.bound);
        assert!(r.f_values.last().unwrap().abs() < 1e-10);
        let m = mean(&w);
        let (lo, hi) = (w.iter().cloned().fold(f64::INFINITY, f64::min), w.iter().cloned().fold(0.0, f64::max));
        assert!(r.f_values.iter().all(|&f| f >= lo - m - 1e-10 && f <= hi - m + 1e-10));
        let mut a = w.clone();
        let mut b = r.tree.freqs().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
        assert_eq!(r.vertex_order, t.dfs_order(0).unwrap());
    }
}
