//! Direct integration of the Kuramoto equations on a tree.
//!
//! In the rotating frame `φ_i = θ_i − ω̄ t` the equations read
//!
//! ```text
//! φ̇_i = ω_i − ω̄ + k Σ_j A_ij sin(φ_j − φ_i)
//! ```
//!
//! and a frequency-locked state is a point where every `φ̇_i` vanishes. The
//! coupling sum runs over tree edges only, so one derivative costs `O(n)`.
//! [`bisect_threshold`] searches for the smallest `k` that locks, giving an
//! empirical threshold independent of the closed form.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, PHASE_STREAM};
use crate::tree::{Edge, KuramotoTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialPhases {
    Zeros,
    /// Independent uniform phases on `(−π/2, π/2)` drawn from the run seed.
    SeededUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `φ_i = θ_i − ω̄ t`; locked states are stationary.
    Rotating,
    /// Raw phases `θ_i`.
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Locking tolerance on `max_i |φ̇_i|`.
    pub fp_tol: f64,
    pub init: InitialPhases,
    /// Keep every `save_stride`-th step in the trajectory.
    pub save_stride: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            dt: 0.01,
            t_max: 500.0,
            fp_tol: 1e-6,
            init: InitialPhases::Zeros,
            save_stride: 100,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::BadParameters(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max > self.dt && self.t_max.is_finite()) {
            return Err(Error::BadParameters(format!("t_max must exceed dt, got {}", self.t_max)));
        }
        if self.fp_tol.is_nan() || self.fp_tol <= 0.0 {
            return Err(Error::BadParameters(format!("fp_tol must be positive, got {}", self.fp_tol)));
        }
        if self.save_stride == 0 {
            return Err(Error::BadParameters("save_stride must be at least 1".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub frame: Frame,
    pub times: Vec<f64>,
    /// One row per saved time point, one column per vertex.
    pub phases: Vec<Vec<f64>>,
    /// Rotating-frame velocities `φ̇_i` at `t_max`.
    pub final_velocities: Vec<f64>,
    /// `max_i |φ̇_i| < fp_tol` at every step of the last 5% of the horizon.
    pub synchronized: bool,
}

impl Trajectory {
    pub fn max_final_speed(&self) -> f64 {
        self.final_velocities.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Delimiter-separated export: header `t,phi_0,…`, one row per saved point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.phases.first().map_or(0, Vec::len);
        write!(out, "t")?;
        for i in 0..n {
            write!(out, ",phi_{i}")?;
        }
        writeln!(out)?;
        for (t, row) in self.times.iter().zip(&self.phases) {
            write!(out, "{t}")?;
            for p in row {
                write!(out, ",{p}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Magnitude of the mean unit phasor at saved point `t_index`.
pub fn order_parameter(traj: &Trajectory, t_index: usize) -> Option<f64> {
    let row = traj.phases.get(t_index)?;
    if row.is_empty() {
        return None;
    }
    let (s, c) = row
        .iter()
        .fold((0.0, 0.0), |(s, c), p| (s + p.sin(), c + p.cos()));
    let n = row.len() as f64;
    Some((s * s + c * c).sqrt() / n)
}

struct Rhs<'a> {
    edges: &'a [Edge],
    drive: Vec<f64>,
    k: f64,
}

impl Rhs<'_> {
    #[inline]
    fn eval(&self, phases: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.drive);
        for &(u, v) in self.edges {
            let s = self.k * (phases[v] - phases[u]).sin();
            out[u] += s;
            out[v] -= s;
        }
    }
}

/// Fixed-step RK4 in the rotating frame.
pub fn integrate(tree: &KuramotoTree, k: f64, cfg: &SimulationConfig, seed: u64) -> Result<Trajectory> {
    run(tree, k, cfg, seed, Frame::Rotating)
}

/// Fixed-step RK4 on the raw phases `θ_i`. Velocities and the locking verdict
/// are still reported in the rotating frame.
pub fn integrate_lab(tree: &KuramotoTree, k: f64, cfg: &SimulationConfig, seed: u64) -> Result<Trajectory> {
    run(tree, k, cfg, seed, Frame::Lab)
}

fn initial_phases(n: usize, init: InitialPhases, seed: u64) -> Vec<f64> {
    match init {
        InitialPhases::Zeros => vec![0.0; n],
        InitialPhases::SeededUniform => {
            let mut rng = stream_rng(seed, PHASE_STREAM);
            (0..n).map(|_| rng.random_range(-FRAC_PI_2..FRAC_PI_2)).collect()
        }
    }
}

fn run(tree: &KuramotoTree, k: f64, cfg: &SimulationConfig, seed: u64, frame: Frame) -> Result<Trajectory> {
    cfg.validate()?;
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::BadParameters(format!("coupling must be finite and >= 0, got {k}")));
    }
    let n = tree.n();
    let mean = tree.mean_frequency();
    let offset = match frame {
        Frame::Rotating => mean,
        Frame::Lab => 0.0,
    };
    let rhs = Rhs {
        edges: tree.edges(),
        drive: tree.freqs().iter().map(|w| w - offset).collect(),
        k,
    };

    let steps = cfg.steps();
    let window_start = steps - (steps / 20).max(1);
    let dt = cfg.dt;
    let mut phi = initial_phases(n, cfg.init, seed);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];

    let mut times = vec![0.0];
    let mut phases = vec![phi.clone()];
    let mut locked = true;

    for step in 0..steps {
        rhs.eval(&phi, &mut k1);
        if step >= window_start && locked {
            let speed = k1.iter().fold(0.0f64, |m, v| m.max((v - (mean - offset)).abs()));
            locked = speed < cfg.fp_tol;
        }
        for i in 0..n {
            tmp[i] = phi[i] + 0.5 * dt * k1[i];
        }
        rhs.eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = phi[i] + 0.5 * dt * k2[i];
        }
        rhs.eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = phi[i] + dt * k3[i];
        }
        rhs.eval(&tmp, &mut k4);
        for i in 0..n {
            phi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let done = step + 1;
        if done % cfg.save_stride == 0 || done == steps {
            let t = done as f64 * dt;
            if phi.iter().any(|p| !p.is_finite()) {
                return Err(Error::NonFinite { t });
            }
            times.push(t);
            phases.push(phi.clone());
        }
    }

    rhs.eval(&phi, &mut k1);
    let final_velocities: Vec<f64> = k1.iter().map(|v| v - (mean - offset)).collect();
    let final_speed = final_velocities.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(Trajectory {
        frame,
        times,
        phases,
        final_velocities,
        synchronized: locked && final_speed < cfg.fp_tol,
    })
}

/// Default bracket `[0, hi]`: twice the guess when one is known, otherwise
/// the total absolute deviation `Σ|ω_i − ω̄|`, which dominates every
/// partition sum.
pub fn default_bracket(tree: &KuramotoTree, guess: Option<f64>) -> (f64, f64) {
    let hi = match guess {
        Some(g) => 2.0 * g,
        None => {
            let mean = tree.mean_frequency();
            tree.freqs().iter().map(|w| (w - mean).abs()).sum()
        }
    };
    (0.0, hi)
}

/// Bisects on `k` until `(hi − lo)/hi < rel_tol` and returns the midpoint.
/// `hi` must lock and `lo` must not.
pub fn bisect_threshold(tree: &KuramotoTree, lo: f64, hi: f64, rel_tol: f64, cfg: &SimulationConfig) -> Result<f64> {
    let invalid = |reason: &str| Error::BracketInvalid {
        lo,
        hi,
        reason: reason.to_string(),
    };
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid("need 0 <= lo < hi"));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::BadParameters(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let locks = |k: f64| integrate(tree, k, cfg, 0).map(|t| t.synchronized);
    if !locks(hi)? {
        return Err(invalid("upper end does not synchronize"));
    }
    if locks(lo)? {
        return Err(invalid("lower end already synchronizes"));
    }
    let (mut lo, mut hi) = (lo, hi);
    while (hi - lo) / hi >= rel_tol {
        let mid = 0.5 * (lo + hi);
        if locks(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One `(tree, k, seed)` integration request.
#[derive(Debug, Clone, Copy)]
pub struct BatchJob<'a> {
    pub tree: &'a KuramotoTree,
    pub k: f64,
    pub seed: u64,
}

/// Runs independent integrations in parallel; results follow input order.
pub fn integrate_batch(jobs: &[BatchJob<'_>], cfg: &SimulationConfig) -> Vec<Result<Trajectory>> {
    jobs.par_iter().map(|j| integrate(j.tree, j.k, cfg, j.seed)).collect()
}
