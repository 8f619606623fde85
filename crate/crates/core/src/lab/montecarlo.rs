//! Seeded Monte Carlo estimate of digit-string frequencies.
//!
//! Starting points are drawn from `(0, 1)`, uniformly by default, and
//! expanded with the double-precision Gauss map. Each block of [`BLOCK`] samples owns its own
//! ChaCha stream, so the counts do not depend on the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cf::{gauss_digits_f64, DigitString};
use crate::error::{Error, Result};
use crate::measure::{pgk_exact, LogRatio};

pub const BLOCK: u64 = 4096;

/// Distribution of the starting points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Sampling {
    /// Uniform on `(0, 1)`. The first digits of each sample are then not yet
    /// Gauss-Kuzmin distributed, which biases short expansions slightly.
    #[default]
    Uniform,
    /// `2^U - 1` with `U` uniform, which has the Gauss-Kuzmin density, so
    /// every window position is unbiased.
    Invariant,
}

impl std::str::FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Sampling::Uniform),
            "invariant" | "gauss-kuzmin" => Ok(Sampling::Invariant),
            other => Err(Error::InvalidArgument(format!("unknown sampling `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub digits_per_sample: usize,
    pub seed: u64,
    pub workers: usize,
    pub sampling: Sampling,
}

impl MonteCarloConfig {
    pub fn new(samples: u64, digits_per_sample: usize, seed: u64) -> Self {
        MonteCarloConfig {
            samples,
            digits_per_sample,
            seed,
            workers: crate::census::default_workers(),
            sampling: Sampling::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub target: DigitString,
    /// Windows equal to the target.
    pub hits: u64,
    /// Windows of the target's length that were examined.
    pub windows: u64,
    pub frequency: f64,
    pub expected: f64,
    pub expected_exact: LogRatio,
}

impl MonteCarloResult {
    pub fn abs_error(&self) -> f64 {
        (self.frequency - self.expected).abs()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.expected
    }
}

fn block_counts(target: &[u64], cfg: &MonteCarloConfig, block: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(block);
    let first = block * BLOCK;
    let count = BLOCK.min(cfg.samples - first);
    let mut buf = Vec::with_capacity(cfg.digits_per_sample);
    let (mut hits, mut windows) = (0u64, 0u64);
    for _ in 0..count {
        let x = loop {
            let u: f64 = rng.gen();
            let x = match cfg.sampling {
                Sampling::Uniform => u,
                Sampling::Invariant => u.exp2() - 1.0,
            };
            if x > 0.0 && x < 1.0 {
                break x;
            }
        };
        gauss_digits_f64(x, cfg.digits_per_sample, &mut buf).expect("x in (0,1)");
        if buf.len() >= target.len() {
            windows += (buf.len() - target.len() + 1) as u64;
            hits += buf.windows(target.len()).filter(|w| *w == target).count() as u64;
        }
    }
    (hits, windows)
}

/// Fraction of length-`n` windows of sampled expansions equal to `target`.
pub fn montecarlo_frequency(target: &DigitString, cfg: &MonteCarloConfig) -> Result<MonteCarloResult> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("sample_count must be positive".into()));
    }
    if cfg.digits_per_sample < target.len() {
        return Err(Error::InvalidArgument(format!(
            "digits_per_sample ({}) is shorter than the target ({})",
            cfg.digits_per_sample,
            target.len()
        )));
    }
    let digits = target
        .to_u64s()
        .ok_or_else(|| Error::InvalidArgument("target digits must fit in 64 bits".into()))?;
    let blocks = cfg.samples.div_ceil(BLOCK);
    let pool = crate::census::pool(cfg.workers)?;
    let (hits, windows) = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| block_counts(&digits, cfg, b))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let expected_exact = pgk_exact(target);
    let expected = expected_exact.to_f64(53)?;
    let frequency = if windows == 0 { 0.0 } else { hits as f64 / windows as f64 };
    Ok(MonteCarloResult { target: target.clone(), hits, windows, frequency, expected, expected_exact })
}
