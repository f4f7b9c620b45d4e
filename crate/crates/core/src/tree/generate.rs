//! Generators for the tree families used throughout the crate.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::Edge;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, TOPOLOGY_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    /// Path `0 - 1 - ... - (n-1)`.
    Chain,
    /// Vertex 0 joined to every other vertex.
    Star,
    /// Two star centres (0 and 1) joined by an edge, `(n-2)/2` leaves each.
    Dumbbell,
    /// Vertex `i > 0` hangs below `(i-1)/2`.
    Binary,
    /// Star at vertex 0 whose centre continues into a path so the diameter
    /// is exactly `diameter`.
    Tadpole { diameter: usize },
    /// Uniformly random labelled tree from a decoded Prüfer sequence.
    RandomUniform,
    /// Preferential attachment: each new vertex joins an existing one with
    /// probability proportional to its degree.
    ScaleFree,
}

impl TopologyKind {
    /// True when the edge list depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, TopologyKind::RandomUniform | TopologyKind::ScaleFree)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParameters(msg));
        if n < 2 {
            return bad(format!("{self} needs n >= 2, got {n}"));
        }
        match *self {
            TopologyKind::Dumbbell if n < 4 || !n.is_multiple_of(2) => bad(format!("dumbbell needs even n >= 4, got {n}")),
            TopologyKind::Tadpole { diameter } if diameter <= 2 => {
                bad(format!("tadpole needs diameter > 2, got {diameter}"))
            }
            TopologyKind::Tadpole { diameter } if n < diameter + 1 => {
                bad(format!("tadpole with diameter {diameter} needs n >= {}, got {n}", diameter + 1))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyKind::Chain => f.write_str("chain"),
            TopologyKind::Star => f.write_str("star"),
            TopologyKind::Dumbbell => f.write_str("dumbbell"),
            TopologyKind::Binary => f.write_str("binary"),
            TopologyKind::Tadpole { diameter } => write!(f, "tadpole:{diameter}"),
            TopologyKind::RandomUniform => f.write_str("random"),
            TopologyKind::ScaleFree => f.write_str("scale_free"),
        }
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let kind = match s.as_str() {
            "chain" | "path" => TopologyKind::Chain,
            "star" => TopologyKind::Star,
            "dumbbell" | "dumb-bell" => TopologyKind::Dumbbell,
            "binary" => TopologyKind::Binary,
            "random" | "random_uniform" | "random-uniform" => TopologyKind::RandomUniform,
            "scale_free" | "scale-free" | "scalefree" => TopologyKind::ScaleFree,
            other => {
                let d = other
                    .strip_prefix("tadpole:")
                    .or_else(|| other.strip_prefix("tadpole(").and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(|| Error::BadParameters(format!("unknown topology {s:?}")))?;
                let diameter = d
                    .parse()
                    .map_err(|_| Error::BadParameters(format!("bad tadpole diameter {d:?}")))?;
                TopologyKind::Tadpole { diameter }
            }
        };
        Ok(kind)
    }
}

/// Edge list for `kind` on `n` vertices. Deterministic families ignore `seed`.
pub fn generate_topology(kind: TopologyKind, n: usize, seed: u64) -> Result<Vec<Edge>> {
    kind.validate(n)?;
    let edges = match kind {
        TopologyKind::Chain => (1..n).map(|i| (i - 1, i)).collect(),
        TopologyKind::Star => (1..n).map(|i| (0, i)).collect(),
        TopologyKind::Dumbbell => {
            let half = (n - 2) / 2;
            let mut e = vec![(0, 1)];
            e.extend((2..2 + half).map(|i| (0, i)));
            e.extend((2 + half..n).map(|i| (1, i)));
            e
        }
        TopologyKind::Binary => (1..n).map(|i| ((i - 1) / 2, i)).collect(),
        TopologyKind::Tadpole { diameter } => {
            // tail 0 - 1 - ... - (D-1), leaves D..n on the centre
            let mut e: Vec<Edge> = (1..diameter).map(|i| (i - 1, i)).collect();
            e.extend((diameter..n).map(|i| (0, i)));
            e
        }
        TopologyKind::RandomUniform => {
            let mut rng = stream_rng(seed, TOPOLOGY_STREAM);
            let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
            prufer_decode(&code)
        }
        TopologyKind::ScaleFree => {
            let mut rng = stream_rng(seed, TOPOLOGY_STREAM);
            let mut endpoints = Vec::with_capacity(2 * (n - 1));
            let mut e = Vec::with_capacity(n - 1);
            for i in 1..n {
                let target = if endpoints.is_empty() {
                    0
                } else {
                    endpoints[rng.random_range(0..endpoints.len())]
                };
                e.push((target, i));
                endpoints.push(target);
                endpoints.push(i);
            }
            e
        }
    };
    Ok(edges)
}

/// Decodes a Prüfer sequence over `0..code.len() + 2` in linear time.
pub fn prufer_decode(code: &[usize]) -> Vec<Edge> {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeTopology;

    fn build(kind: TopologyKind, n: usize, seed: u64) -> TreeTopology {
        TreeTopology::new(n, generate_topology(kind, n, seed).unwrap()).unwrap()
    }

    #[test]
    fn chain_edges() {
        assert_eq!(generate_topology(TopologyKind::Chain, 4, 0).unwrap(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(build(TopologyKind::Chain, 4, 0).diameter(), 3);
    }

    #[test]
    fn star_shape() {
        let t = build(TopologyKind::Star, 60, 0);
        assert_eq!(t.diameter(), 2);
        assert_eq!((0..60).map(|v| t.degree(v)).max(), Some(59));
        assert_eq!(t.max_partition_size(), 1);
    }

    #[test]
    fn dumbbell_partitions() {
        let t = build(TopologyKind::Dumbbell, 6, 0);
        let mut sizes = t.partition_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 1, 3]);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.degree(1), 3);
        assert_eq!(build(TopologyKind::Dumbbell, 60, 0).max_partition_size(), 30);
        assert!(generate_topology(TopologyKind::Dumbbell, 7, 0).is_err());
        assert!(generate_topology(TopologyKind::Dumbbell, 2, 0).is_err());
    }

    #[test]
    fn tadpole_diameter_and_partition() {
        let t = build(TopologyKind::Tadpole { diameter: 8 }, 17, 0);
        assert_eq!(t.diameter(), 8);
        for n in [9, 14, 20, 60, 100] {
            assert_eq!(build(TopologyKind::Tadpole { diameter: 8 }, n, 0).diameter(), 8);
        }
        for n in [14, 20, 60, 100] {
            assert_eq!(build(TopologyKind::Tadpole { diameter: 8 }, n, 0).max_partition_size(), 7);
        }
        assert!(generate_topology(TopologyKind::Tadpole { diameter: 8 }, 8, 0).is_err());
        assert!(generate_topology(TopologyKind::Tadpole { diameter: 2 }, 8, 0).is_err());
    }

    #[test]
    fn binary_shape() {
        let t = build(TopologyKind::Binary, 255, 0);
        assert_eq!(t.edges().len(), 254);
        assert_eq!(t.height(0), 7);
        assert_eq!(t.max_partition_size(), 127);
        assert_eq!(build(TopologyKind::Binary, 15, 0).diameter(), 6);
    }

    #[test]
    fn chain_and_star_invariants() {
        for n in 2..40 {
            let c = build(TopologyKind::Chain, n, 0);
            assert_eq!(c.diameter(), n - 1);
            assert_eq!(c.max_partition_size(), n / 2);
            if n >= 3 {
                let s = build(TopologyKind::Star, n, 0);
                assert_eq!(s.diameter(), 2);
                assert_eq!(s.max_partition_size(), 1);
            }
        }
    }

    #[test]
    fn random_trees_are_reproducible() {
        for kind in [TopologyKind::RandomUniform, TopologyKind::ScaleFree] {
            let a = generate_topology(kind, 50, 11).unwrap();
            assert_eq!(a, generate_topology(kind, 50, 11).unwrap());
            assert_ne!(a, generate_topology(kind, 50, 12).unwrap());
            TreeTopology::new(50, a).unwrap();
        }
        assert_eq!(generate_topology(TopologyKind::RandomUniform, 2, 0).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn prufer_leaf_fraction_near_inverse_e() {
        let n = 2000;
        let mut leaves = 0usize;
        let seeds = 50;
        for seed in 0..seeds {
            let t = build(TopologyKind::RandomUniform, n, seed);
            leaves += (0..n).filter(|&v| t.degree(v) == 1).count();
        }
        let frac = leaves as f64 / (n as f64 * seeds as f64);
        assert!((frac - (-1.0f64).exp()).abs() < 0.02, "leaf fraction {frac}");
    }

    #[test]
    fn prufer_known_decoding() {
        // code [3, 3, 3] on 5 vertices: star centred at 3
        let mut e = prufer_decode(&[3, 3, 3]);
        e.iter_mut().for_each(|x| *x = crate::tree::normalize_edge(*x));
        e.sort_unstable();
        assert_eq!(e, vec![(0, 3), (1, 3), (2, 3), (3, 4)]);
    }

    #[test]
    fn scale_free_has_hubs() {
        let t = build(TopologyKind::ScaleFree, 2000, 3);
        let max_deg = (0..2000).map(|v| t.degree(v)).max().unwrap();
        assert!(max_deg > 20, "max degree {max_deg}");
    }

    #[test]
    fn kind_round_trips_through_text() {
        for k in [
            TopologyKind::Chain,
            TopologyKind::Star,
            TopologyKind::Dumbbell,
            TopologyKind::Binary,
            TopologyKind::Tadpole { diameter: 8 },
            TopologyKind::RandomUniform,
            TopologyKind::ScaleFree,
        ] {
            assert_eq!(k.to_string().parse::<TopologyKind>().unwrap(), k);
        }
        assert_eq!("tadpole(5)".parse::<TopologyKind>().unwrap(), TopologyKind::Tadpole { diameter: 5 });
        assert!("ring".parse::<TopologyKind>().is_err());
    }
}
