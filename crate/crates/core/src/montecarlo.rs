//! Seeded Monte Carlo estimation of mean trajectories and mean
//! survivability, used as an independent check on the closed forms.
//!
//! Samples are split into fixed-size blocks. Block `b` draws from its own
//! ChaCha8 stream (`seed`, stream `b`), and per-block statistics are merged
//! in block order, so results do not depend on how many threads run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{eval_trajectory, EventTime, Realization, WfModel};
use crate::saw::{survivability_sample, TeamProfile, TimeGrid, WeightVector};

/// Name and version of the pseudorandom generator behind every estimate.
pub const GENERATOR: &str = "chacha8/rand_chacha-0.9";

/// Samples per independently seeded block.
pub const BLOCK_SIZE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed }
    }

    pub fn generator(&self) -> &'static str {
        GENERATOR
    }

    /// Generator for sample block `block`.
    pub fn block_rng(&self, block: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(block);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl McEstimate {
    /// Standardized deviation of `reference` from the estimate. Zero when
    /// the two agree exactly, infinite when they differ with zero error.
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = self.mean - reference;
        if gap == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY.copysign(gap)
        } else {
            gap / self.std_error
        }
    }
}

/// Draws `tau ~ Exp(kappa)` by inversion and an independent `r ~ U[0, 1)`.
pub fn sample_realization<R: Rng + ?Sized>(ev: EventTime, rng: &mut R) -> Realization {
    // 1 - U[0,1) lies in (0, 1], so the logarithm is finite.
    let u: f64 = 1.0 - rng.random::<f64>();
    let tau = -u.ln() / ev.kappa();
    let r = rng.random::<f64>();
    Realization { tau, r }
}

/// Running mean and sum of squared deviations (Welford / Chan et al.).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.n as f64 / n as f64);
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        self.n = n;
    }

    fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: (var / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

/// Generic engine: `draws` realizations per sample, one sample reused
/// across the whole grid.
fn estimate_on_grid<F>(
    ev: EventTime,
    grid: &TimeGrid,
    n: u64,
    rng: RngSpec,
    draws: usize,
    eval: F,
) -> Result<Vec<McEstimate>>
where
    F: Fn(&[Realization], f64) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::InsufficientSamples(n));
    }
    let blocks = n.div_ceil(BLOCK_SIZE);
    let points = grid.points();
    let partials: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut gen = rng.block_rng(b);
            let size = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
            let mut acc = vec![Moments::default(); points.len()];
            let mut reals = vec![Realization { tau: 0.0, r: 0.0 }; draws];
            for _ in 0..size {
                for real in reals.iter_mut() {
                    *real = sample_realization(ev, &mut gen);
                }
                for (m, &t) in acc.iter_mut().zip(points) {
                    m.push(eval(&reals, t));
                }
            }
            acc
        })
        .collect();

    let mut total = vec![Moments::default(); points.len()];
    for block in &partials {
        for (acc, part) in total.iter_mut().zip(block) {
            acc.merge(part);
        }
    }
    Ok(total
        .iter()
        .map(|m| {
            let mut est = m.estimate();
            // levels lie in [0, 1]; guard against rounding in the merge
            est.mean = est.mean.clamp(0.0, 1.0);
            est
        })
        .collect())
}

/// Monte Carlo estimate of `E[x(t)]` for one model at each grid point.
pub fn mc_mean_trajectory(
    model: &WfModel,
    ev: EventTime,
    grid: &TimeGrid,
    n: u64,
    rng: RngSpec,
) -> Result<Vec<McEstimate>> {
    estimate_on_grid(ev, grid, n, rng, 1, |reals, t| {
        eval_trajectory(model, reals[0], t)
    })
}

/// Monte Carlo estimate of expected survivability; every function gets its
/// own independent realization within a sample.
pub fn mc_survivability(
    profile: &TeamProfile,
    weights: &WeightVector,
    ev: EventTime,
    grid: &TimeGrid,
    n: u64,
    rng: RngSpec,
) -> Result<Vec<McEstimate>> {
    estimate_on_grid(ev, grid, n, rng, 6, |reals, t| {
        let reals: &[Realization; 6] = reals.try_into().expect("six realizations per sample");
        survivability_sample(profile, weights, reals, t)
    })
}
