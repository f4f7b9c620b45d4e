//! Data tables behind the expected-coupling plots.
//!
//! Each table has the plotted x value in its first column, Monte Carlo means
//! with standard errors, and the overlay curves (estimators and bounds)
//! evaluated at the same x. Plotting itself is left to external tools.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::montecarlo::{
    chain_bounds, check_bounds, chi, estimator_binary, estimator_dumbbell, estimator_dumbbell_initial,
    estimator_star, estimator_star_normal, run_campaign_with_workers, McCampaign, McEstimate,
};
use crate::tree::{FrequencyDistribution, TopologyKind};

pub const FIGURE_IDS: [u32; 7] = [4, 5, 7, 8, 9, 10, 11];

const ORDER_GRID: [usize; 17] = [4, 10, 20, 40, 60, 80, 100, 120, 140, 160, 180, 200, 220, 240, 260, 280, 300];
const FAMILY_ORDERS: [usize; 5] = [20, 40, 60, 80, 100];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub id: u32,
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl FigureTable {
    pub fn file_name(&self) -> String {
        format!("figure{}_{}.csv", self.id, self.name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Campaign settings shared by every table.
#[derive(Debug, Clone, Copy)]
pub struct FigureSettings {
    pub samples: u64,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl FigureSettings {
    fn campaign(&self, kind: TopologyKind, n: usize, dist: FrequencyDistribution) -> Result<McEstimate> {
        run_campaign_with_workers(&McCampaign::new(kind, n, dist, self.samples, self.seed), self.workers)
    }
}

fn cells(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn uniform() -> FrequencyDistribution {
    FrequencyDistribution::standard_uniform()
}

fn normal() -> FrequencyDistribution {
    FrequencyDistribution::matched_normal()
}

pub fn figure(id: u32, s: &FigureSettings) -> Result<FigureTable> {
    match id {
        4 => chain_table(s),
        5 => star_table(s),
        7 => dumbbell_table(s),
        8 => binary_table(s),
        9..=11 => family_table(id, s),
        _ => Err(Error::BadParameters(format!(
            "unknown figure {id}; expected one of {FIGURE_IDS:?}"
        ))),
    }
}

fn chain_table(s: &FigureSettings) -> Result<FigureTable> {
    let mut rows = Vec::new();
    for n in ORDER_GRID {
        let u = s.campaign(TopologyKind::Chain, n, uniform())?;
        let g = s.campaign(TopologyKind::Chain, n, normal())?;
        let b = chain_bounds(n);
        rows.push(cells(&[
            n as f64, u.mean, u.stderr, g.mean, g.stderr, chi(n), b.lower, b.upper, b.kolmogorov,
        ]));
    }
    Ok(FigureTable {
        id: 4,
        name: "chain",
        header: vec![
            "n", "mean_uniform", "stderr_uniform", "mean_normal", "stderr_normal", "chi", "walk_lower", "walk_upper",
            "kolmogorov",
        ],
        rows,
    })
}

fn star_table(s: &FigureSettings) -> Result<FigureTable> {
    let mut rows = Vec::new();
    for n in ORDER_GRID {
        let u = s.campaign(TopologyKind::Star, n, uniform())?;
        let g = s.campaign(TopologyKind::Star, n, normal())?;
        rows.push(cells(&[
            n as f64,
            u.mean,
            u.stderr,
            g.mean,
            g.stderr,
            estimator_star(n),
            0.5,
            estimator_star_normal(n),
        ]));
    }
    Ok(FigureTable {
        id: 5,
        name: "star",
        header: vec![
            "n", "mean_uniform", "stderr_uniform", "mean_normal", "stderr_normal", "estimator", "limit", "estimator_normal",
        ],
        rows,
    })
}

fn dumbbell_table(s: &FigureSettings) -> Result<FigureTable> {
    let mut rows = Vec::new();
    for n in ORDER_GRID {
        let u = s.campaign(TopologyKind::Dumbbell, n, uniform())?;
        let g = s.campaign(TopologyKind::Dumbbell, n, normal())?;
        rows.push(cells(&[
            n as f64,
            u.mean,
            u.stderr,
            g.mean,
            g.stderr,
            estimator_dumbbell_initial(n),
            estimator_dumbbell(n)?,
        ]));
    }
    Ok(FigureTable {
        id: 7,
        name: "dumbbell",
        header: vec![
            "n", "mean_uniform", "stderr_uniform", "mean_normal", "stderr_normal", "initial", "estimator",
        ],
        rows,
    })
}

fn binary_table(s: &FigureSettings) -> Result<FigureTable> {
    let mut rows = Vec::new();
    for n in ORDER_GRID {
        let u = s.campaign(TopologyKind::Binary, n, uniform())?;
        let g = s.campaign(TopologyKind::Binary, n, normal())?;
        rows.push(cells(&[
            n as f64,
            u.mean,
            u.stderr,
            g.mean,
            g.stderr,
            estimator_binary(n),
            chi(n),
            estimator_dumbbell(n)?,
        ]));
    }
    Ok(FigureTable {
        id: 8,
        name: "binary",
        header: vec![
            "n", "mean_uniform", "stderr_uniform", "mean_normal", "stderr_normal", "estimator", "chain", "dumbbell",
        ],
        rows,
    })
}

fn families() -> [TopologyKind; 7] {
    [
        TopologyKind::Chain,
        TopologyKind::Star,
        TopologyKind::Dumbbell,
        TopologyKind::Binary,
        TopologyKind::Tadpole { diameter: 8 },
        TopologyKind::RandomUniform,
        TopologyKind::ScaleFree,
    ]
}

/// One row per (family, n) under uniform frequencies; the three tables
/// differ only in their x column and overlay.
fn family_table(id: u32, s: &FigureSettings) -> Result<FigureTable> {
    let (name, x_name, curve_name) = match id {
        9 => ("diameter", "diameter", "chi_diameter_plus_one"),
        10 => ("partition", "max_partition", "partition_lower"),
        _ => ("partition_log", "p_log_n_over_p", "partition_upper"),
    };
    let mut rows = Vec::new();
    for kind in families() {
        for n in FAMILY_ORDERS {
            let c = McCampaign::new(kind, n, uniform(), s.samples, s.seed);
            let topo = c.tree_topology()?;
            let est = run_campaign_with_workers(&c, s.workers)?;
            let r = check_bounds(&topo, &c.dist, &est);
            let p = r.max_partition as f64;
            let (x, curve) = match id {
                9 => (r.diameter as f64, r.lower_by_diameter),
                10 => (p, r.lower_by_partition),
                _ => (p * (n as f64 / p).ln(), r.upper_by_partition),
            };
            let mut row = vec![x.to_string(), kind.to_string(), n.to_string()];
            row.extend(cells(&[est.mean, est.stderr, curve]));
            rows.push(row);
        }
    }
    Ok(FigureTable {
        id,
        name,
        header: vec![x_name, "family", "n", "mean", "stderr", curve_name],
        rows,
    })
}
