//! Tree documents and result documents.
//!
//! Documents are JSON with a fixed field order, one field per line, and
//! floats in shortest round-trip form, so writing a document that was just
//! read reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coupling::CouplingReport;
use crate::error::{Error, Result};
use crate::rearrange::RearrangementResult;
use crate::tree::{Edge, KuramotoTree};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    n: usize,
    edges: Vec<Edge>,
    freqs: Vec<f64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RearrangementDocRaw {
    n: usize,
    edges: Vec<Edge>,
    freqs: Vec<f64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    assignment: Vec<usize>,
    k_c_before: f64,
    k_c_after: f64,
    bound: f64,
}

/// A rearrangement document read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementDoc {
    /// The tree with its rearranged frequencies.
    pub tree: KuramotoTree,
    pub assignment: Vec<usize>,
    pub k_c_before: f64,
    pub k_c_after: f64,
    pub bound: f64,
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn tree_fields(tree: &KuramotoTree, out: &mut String) {
    let edges: Vec<[usize; 2]> = tree.edges().iter().map(|&(u, v)| [u, v]).collect();
    let _ = write!(out, "  \"n\": {},\n  \"edges\": {},\n  \"freqs\": {}", tree.n(), json(&edges), json(tree.freqs()));
    if let Some(labels) = tree.labels() {
        let _ = write!(out, ",\n  \"labels\": {}", json(labels));
    }
}

pub fn tree_to_string(tree: &KuramotoTree) -> String {
    let mut out = String::from("{\n");
    tree_fields(tree, &mut out);
    out.push_str("\n}\n");
    out
}

fn build_tree(n: usize, edges: Vec<Edge>, freqs: Vec<f64>, labels: Option<Vec<String>>) -> Result<KuramotoTree> {
    let tree = KuramotoTree::new(n, edges, freqs)?;
    match labels {
        Some(l) => tree.with_labels(l),
        None => Ok(tree),
    }
}

pub fn tree_from_str(text: &str) -> Result<KuramotoTree> {
    let doc: TreeDoc = serde_json::from_str(text).map_err(parse_error)?;
    build_tree(doc.n, doc.edges, doc.freqs, doc.labels)
}

pub fn rearrangement_to_string(r: &RearrangementResult) -> String {
    let mut out = String::from("{\n");
    tree_fields(&r.tree, &mut out);
    let _ = write!(
        out,
        ",\n  \"assignment\": {},\n  \"k_c_before\": {},\n  \"k_c_after\": {},\n  \"bound\": {}\n}}\n",
        json(&r.assignment),
        json(&r.k_c_before),
        json(&r.k_c_after),
        json(&r.bound)
    );
    out
}

/// Reads a rearrangement document, checking that `assignment` is a permutation.
pub fn rearrangement_from_str(text: &str) -> Result<RearrangementDoc> {
    let doc: RearrangementDocRaw = serde_json::from_str(text).map_err(parse_error)?;
    let tree = build_tree(doc.n, doc.edges, doc.freqs, doc.labels)?;
    if doc.assignment.len() != tree.n() {
        return Err(Error::LengthMismatch {
            what: "assignment entries",
            expected: tree.n(),
            found: doc.assignment.len(),
        });
    }
    let mut seen = vec![false; tree.n()];
    for &a in &doc.assignment {
        if a >= seen.len() || std::mem::replace(&mut seen[a], true) {
            return Err(Error::BadParameters(format!("assignment is not a permutation (entry {a})")));
        }
    }
    Ok(RearrangementDoc {
        tree,
        assignment: doc.assignment,
        k_c_before: doc.k_c_before,
        k_c_after: doc.k_c_after,
        bound: doc.bound,
    })
}

pub fn report_to_string(report: &CouplingReport) -> String {
    let mut s = report.to_json();
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_tree(path: &Path) -> Result<KuramotoTree> {
    tree_from_str(&read_text(path)?)
}

pub fn write_tree(path: &Path, tree: &KuramotoTree) -> Result<()> {
    write_text(path, &tree_to_string(tree))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_layout() {
        let t = KuramotoTree::new(3, vec![(1, 0), (1, 2)], vec![0.0, 0.1, 1.0]).unwrap();
        assert_eq!(
            tree_to_string(&t),
            "{\n  \"n\": 3,\n  \"edges\": [[1,0],[1,2]],\n  \"freqs\": [0.0,0.1,1.0]\n}\n"
        );
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let w = crate::sample_frequencies(&crate::FrequencyDistribution::standard_uniform(), 20, 3);
        let edges = crate::generate_topology(crate::TopologyKind::RandomUniform, 20, 3).unwrap();
        let t = KuramotoTree::new(20, edges, w)
            .unwrap()
            .with_labels((0..20).map(|i| format!("v\"{i}")).collect())
            .unwrap();
        let text = tree_to_string(&t);
        let back = tree_from_str(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(tree_to_string(&back), text);
    }

    #[test]
    fn parse_errors_carry_position() {
        match tree_from_str("{\n  \"n\": 2,\n  \"edges\": [[0,1]],\n  \"freqs\": [0.0 1.0]\n}") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(tree_from_str("{\"n\":2,\"edges\":[[0,1]],\"freqs\":[0,1],\"x\":1}"), Err(Error::Parse { .. })));
        assert!(matches!(tree_from_str("{\"n\":2,\"edges\":[[0,1]]}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn structural_errors_are_distinct() {
        let e = tree_from_str("{\"n\":3,\"edges\":[[0,1],[1,0]],\"freqs\":[0,1,2]}").unwrap_err();
        assert!(e.is_structural(), "{e:?}");
        let e = tree_from_str("{\"n\":2,\"edges\":[[0,1]],\"freqs\":[0]}").unwrap_err();
        assert!(e.is_structural());
    }

    #[test]
    fn rearrangement_round_trip() {
        let t = KuramotoTree::new(4, vec![(0, 1), (1, 2), (2, 3)], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let r = crate::rearrange::rearrange(&t, 0).unwrap();
        let text = rearrangement_to_string(&r);
        let doc = rearrangement_from_str(&text).unwrap();
        assert_eq!(doc.assignment, r.assignment);
        assert_eq!(doc.k_c_after, r.k_c_after);
        assert_eq!(doc.tree.freqs(), r.tree.freqs());
        let bad = text.replace(&json(&r.assignment), "[0,0,1,2]");
        assert!(matches!(rearrangement_from_str(&bad), Err(Error::BadParameters(_))));
    }
}
