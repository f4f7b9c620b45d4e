//! Critical coupling of Kuramoto oscillator trees.
//!
//! For a tree of phase oscillators with natural frequencies `ω_i`, a
//! frequency-locked state exists exactly when the coupling `k` is at least
//! the largest partition sum over the tree's edges. This crate computes that
//! threshold in linear time, checks it against direct integration of the
//! oscillator equations, estimates its expectation over random frequencies
//! for several tree families, and rearranges frequencies to bound it by the
//! frequency spread.

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod io;
pub mod montecarlo;
pub mod numeric;
pub mod rearrange;
pub mod rng;
pub mod special;
pub mod tree;

pub use coupling::{
    critical_coupling, critical_coupling_value, cut_edge_lower_bound, cut_vertex_reduce, graph_critical_coupling,
    partition_sum, CouplingReport, CouplingScratch, CutReduction, EdgeOmega,
};
pub use error::{Error, Result};
pub use tree::{
    generate_topology, sample_frequencies, Edge, EdgePartition, FrequencyDistribution, KuramotoGraph, KuramotoTree,
    TopologyKind, TreeTopology,
};
