//! Seeded parallel Monte Carlo estimation of the expected critical coupling.
//!
//! Sample `s` of a campaign draws its frequencies from stream `s` of the
//! master seed, so the set of per-sample values does not depend on how work
//! is split across threads. Samples are grouped into fixed-size chunks whose
//! accumulators are merged in chunk order, making the reported mean
//! bit-identical for any worker count.

mod bounds;
mod estimators;
mod fit;

pub use bounds::{check_bounds, check_bounds_for, BoundsReport};
pub use estimators::{
    chain_bounds, chain_bounds_sigma, chi, chi_sigma, estimator_binary, estimator_dumbbell,
    estimator_dumbbell_initial, estimator_star, estimator_star_normal, estimator_star_normal_sigma,
    estimator_star_sigma, ChainBounds,
};
pub use fit::fit_sqrt_curve;

use rayon::prelude::*;
use serde::Serialize;

use crate::coupling::{critical_coupling_value, CouplingScratch};
use crate::error::{Error, Result};
use crate::rng::StreamKey;
use crate::tree::{generate_topology, FrequencyDistribution, TopologyKind, TreeTopology};

/// Samples per work item.
const CHUNK: u64 = 1024;
pub const HISTOGRAM_BINS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCampaign {
    pub topology: TopologyKind,
    pub n: usize,
    pub dist: FrequencyDistribution,
    pub samples: u64,
    pub master_seed: u64,
    pub histogram: bool,
}

impl McCampaign {
    pub fn new(topology: TopologyKind, n: usize, dist: FrequencyDistribution, samples: u64, master_seed: u64) -> Self {
        McCampaign {
            topology,
            n,
            dist,
            samples,
            master_seed,
            histogram: false,
        }
    }

    pub fn with_histogram(mut self) -> Self {
        self.histogram = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::BadParameters("a campaign needs at least one sample".into()));
        }
        self.topology.validate(self.n)?;
        self.dist.validate()
    }

    /// The fixed topology of this campaign; random families are drawn once
    /// from the master seed.
    pub fn tree_topology(&self) -> Result<TreeTopology> {
        TreeTopology::new(self.n, generate_topology(self.topology, self.n, self.master_seed)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// Upper edge of the last bin; bins span `[0, hi]` uniformly.
    pub hi: f64,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub sd: f64,
    pub samples: u64,
    pub min: f64,
    pub max: f64,
    pub histogram: Option<Histogram>,
}

/// Mergeable running moments (Welford within a chunk, Chan across chunks).
#[derive(Debug, Clone, Copy)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Moments {
    fn new() -> Self {
        Moments {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn merge(&mut self, o: &Moments) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let total = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / total as f64;
        self.m2 += o.m2 + d * d * (self.count as f64 * o.count as f64) / total as f64;
        self.count = total;
        self.min = self.min.min(o.min);
        self.max = self.max.max(o.max);
    }
}

fn histogram(values: &[f64], hi: f64) -> Histogram {
    let mut counts = vec![0u64; HISTOGRAM_BINS];
    let scale = if hi > 0.0 { HISTOGRAM_BINS as f64 / hi } else { 0.0 };
    for &v in values {
        let b = ((v * scale) as usize).min(HISTOGRAM_BINS - 1);
        counts[b] += 1;
    }
    Histogram { hi, counts }
}

/// Evaluates `statistic` on `samples` independent frequency draws over a
/// fixed topology and summarizes the values. `workers = None` uses the
/// global thread pool.
///
/// The statistic receives the topology, the frequencies of one sample and a
/// reusable scratch buffer.
pub fn sample_statistic<F>(
    topo: &TreeTopology,
    dist: &FrequencyDistribution,
    samples: u64,
    master_seed: u64,
    keep_histogram: bool,
    workers: Option<usize>,
    statistic: F,
) -> Result<McEstimate>
where
    F: Fn(&TreeTopology, &[f64], &mut CouplingScratch) -> f64 + Sync,
{
    if samples == 0 {
        return Err(Error::BadParameters("a campaign needs at least one sample".into()));
    }
    dist.validate()?;
    let key = StreamKey::new(master_seed);
    let sampler = dist.sampler();
    let n = topo.n();
    let chunks = samples.div_ceil(CHUNK);

    let work = || {
        (0..chunks)
            .into_par_iter()
            .map_init(
                || (vec![0.0; n], CouplingScratch::new()),
                |(freqs, scratch), c| {
                    let mut m = Moments::new();
                    let mut kept = Vec::new();
                    for s in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                        let mut rng = key.rng(s);
                        sampler.fill(&mut rng, freqs);
                        let k = statistic(topo, freqs, scratch);
                        m.push(k);
                        if keep_histogram {
                            kept.push(k);
                        }
                    }
                    (m, kept)
                },
            )
            .collect::<Vec<_>>()
    };
    let parts = match workers {
        None => work(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::BadParameters(format!("cannot start {w} workers: {e}")))?
            .install(work),
    };

    let mut total = Moments::new();
    for (m, _) in &parts {
        total.merge(m);
    }
    let sd = if total.count > 1 {
        (total.m2 / (total.count - 1) as f64).sqrt()
    } else {
        0.0
    };
    let hist = keep_histogram.then(|| {
        let values: Vec<f64> = parts.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        histogram(&values, total.max)
    });
    Ok(McEstimate {
        mean: total.mean,
        stderr: sd / (total.count as f64).sqrt(),
        sd,
        samples: total.count,
        min: total.min,
        max: total.max,
        histogram: hist,
    })
}

/// Expected critical coupling for one campaign on the global thread pool.
pub fn run_campaign(c: &McCampaign) -> Result<McEstimate> {
    run_campaign_with_workers(c, None)
}

/// As [`run_campaign`] on a dedicated pool of `workers` threads.
pub fn run_campaign_with_workers(c: &McCampaign, workers: Option<usize>) -> Result<McEstimate> {
    c.validate()?;
    let topo = c.tree_topology()?;
    sample_statistic(&topo, &c.dist, c.samples, c.master_seed, c.histogram, workers, |t, w, s| {
        critical_coupling_value(t, w, s)
    })
}

/// One row of campaign output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignRow {
    pub family: String,
    pub n: usize,
    pub dist: String,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
}

impl CampaignRow {
    pub const HEADER: &'static str = "family,n,dist,samples,mean,stderr";

    pub fn new(c: &McCampaign, e: &McEstimate) -> Self {
        CampaignRow {
            family: c.topology.to_string(),
            n: c.n,
            dist: c.dist.to_string(),
            samples: e.samples,
            mean: e.mean,
            stderr: e.stderr,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.family, self.n, self.dist, self.samples, self.mean, self.stderr
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform() -> FrequencyDistribution {
        FrequencyDistribution::standard_uniform()
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut seq = Moments::new();
        xs.iter().for_each(|&x| seq.push(x));
        let mut a = Moments::new();
        let mut b = Moments::new();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - seq.mean).abs() < 1e-12);
        assert!((a.m2 - seq.m2).abs() < 1e-9 * seq.m2);
        assert_eq!((a.min, a.max, a.count), (seq.min, seq.max, seq.count));
    }

    #[test]
    fn campaign_matches_sequential_reference() {
        let c = McCampaign::new(TopologyKind::Binary, 31, uniform(), 3000, 17);
        let est = run_campaign(&c).unwrap();
        let topo = c.tree_topology().unwrap();
        let key = StreamKey::new(17);
        let mut scratch = CouplingScratch::new();
        let mut freqs = vec![0.0; 31];
        let mut values = Vec::new();
        for s in 0..3000 {
            crate::tree::sample_frequencies_into(&c.dist, &mut key.rng(s), &mut freqs);
            values.push(critical_coupling_value(&topo, &freqs, &mut scratch));
        }
        let mean = values.iter().sum::<f64>() / 3000.0;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 2999.0;
        assert!((est.mean - mean).abs() < 1e-12);
        assert!((est.stderr - (var / 3000.0).sqrt()).abs() < 1e-12);
        assert_eq!(est.samples, 3000);
    }

    #[test]
    fn sample_zero_uses_sample_frequencies() {
        let d = uniform();
        let c = McCampaign::new(TopologyKind::Chain, 10, d, 1, 99);
        let est = run_campaign(&c).unwrap();
        let t = crate::KuramotoTree::from_topology(c.tree_topology().unwrap(), crate::sample_frequencies(&d, 10, 99)).unwrap();
        assert_eq!(est.mean, crate::critical_coupling(&t).k_c);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let c = McCampaign::new(TopologyKind::Chain, 50, uniform(), 10_000, 5);
        let one = run_campaign_with_workers(&c, Some(1)).unwrap();
        let three = run_campaign_with_workers(&c, Some(3)).unwrap();
        assert_eq!(one, three);
        assert_eq!(one.mean.to_bits(), run_campaign(&c).unwrap().mean.to_bits());
    }

    #[test]
    fn histogram_counts_every_sample() {
        let c = McCampaign::new(TopologyKind::Star, 20, uniform(), 5000, 1).with_histogram();
        let est = run_campaign(&c).unwrap();
        let h = est.histogram.unwrap();
        assert_eq!(h.counts.len(), HISTOGRAM_BINS);
        assert_eq!(h.counts.iter().sum::<u64>(), 5000);
        assert_eq!(h.hi, est.max);
        assert!(*h.counts.last().unwrap() >= 1);
    }

    #[test]
    fn shrinking_spread_drives_mean_to_zero() {
        let mut prev = f64::INFINITY;
        for sd in [1e-1, 1e-4, 1e-8] {
            let d = FrequencyDistribution::normal(0.5, sd).unwrap();
            let est = run_campaign(&McCampaign::new(TopologyKind::Binary, 15, d, 2000, 0)).unwrap();
            assert!(est.mean < prev);
            assert!(est.mean >= 0.0);
            prev = est.mean;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn rejects_empty_campaign() {
        assert!(run_campaign(&McCampaign::new(TopologyKind::Chain, 5, uniform(), 0, 0)).is_err());
        assert!(run_campaign(&McCampaign::new(TopologyKind::Dumbbell, 5, uniform(), 10, 0)).is_err());
    }

    #[test]
    fn csv_row() {
        let c = McCampaign::new(TopologyKind::Tadpole { diameter: 8 }, 20, uniform(), 10, 0);
        let e = run_campaign(&c).unwrap();
        let row = CampaignRow::new(&c, &e).to_csv();
        assert!(row.starts_with("tadpole:8,20,uniform:0:1,10,"));
        assert_eq!(row.split(',').count(), CampaignRow::HEADER.split(',').count());
    }
}
