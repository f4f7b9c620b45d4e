use serde::Serialize;

use super::estimators::chi_sigma;
use super::McEstimate;
use crate::error::Result;
use crate::special::mu;
use crate::tree::{generate_topology, FrequencyDistribution, TopologyKind, TreeTopology};

/// Campaign mean set against the diameter, order and partition bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub diameter: usize,
    pub max_partition: usize,
    pub estimate: McEstimate,
    /// `χ(D+1)`: the chain spanning a longest path.
    pub lower_by_diameter: f64,
    /// `χ(n)`: the chain on all vertices.
    pub upper_by_order: f64,
    /// `σ√(P/π)`.
    pub lower_by_partition: f64,
    /// `(3/2)σ√(P ln(n/P))`.
    pub upper_by_partition: f64,
    /// `σμ(n−2)`, reported for normal frequencies only.
    pub lower_by_star_normal: Option<f64>,
    /// Every lower bound ≤ mean ≤ every upper bound, with `2·stderr` slack.
    pub all_hold: bool,
}

impl BoundsReport {
    /// Same test as `all_hold` with an arbitrary slack.
    pub fn holds_within(&self, slack: f64) -> bool {
        let m = self.estimate.mean;
        let lowers = [Some(self.lower_by_diameter), Some(self.lower_by_partition), self.lower_by_star_normal];
        lowers.into_iter().flatten().all(|l| l <= m + slack)
            && m <= self.upper_by_order + slack
            && m < self.upper_by_partition + slack
    }
}

pub fn check_bounds(topo: &TreeTopology, dist: &FrequencyDistribution, estimate: &McEstimate) -> BoundsReport {
    let n = topo.n();
    let d = topo.diameter();
    let p = topo.max_partition_size();
    let sigma = dist.sigma();
    let (nf, pf) = (n as f64, p as f64);
    let mut report = BoundsReport {
        n,
        diameter: d,
        max_partition: p,
        estimate: estimate.clone(),
        lower_by_diameter: chi_sigma(d + 1, sigma),
        upper_by_order: chi_sigma(n, sigma),
        lower_by_partition: sigma * (pf / std::f64::consts::PI).sqrt(),
        upper_by_partition: 1.5 * sigma * (pf * (nf / pf).ln()).sqrt(),
        lower_by_star_normal: (dist.is_normal() && n >= 3).then(|| sigma * mu((n - 2) as f64)),
        all_hold: false,
    };
    report.all_hold = report.holds_within(2.0 * estimate.stderr);
    report
}

/// [`check_bounds`] on a freshly generated member of a family.
pub fn check_bounds_for(
    kind: TopologyKind,
    n: usize,
    seed: u64,
    dist: &FrequencyDistribution,
    estimate: &McEstimate,
) -> Result<BoundsReport> {
    let topo = TreeTopology::new(n, generate_topology(kind, n, seed)?)?;
    Ok(check_bounds(&topo, dist, estimate))
}
