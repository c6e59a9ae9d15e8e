//! Ground-truth brute force and Monte Carlo over integer compositions.
//!
//! A composition of `n` corresponds to a subset of the `n - 1` gaps between
//! `n` unit balls (the balls-and-bars bijection), so exhaustive enumeration
//! walks all `2^(n-1)` bar masks and uniform sampling draws `n - 1` fair
//! bits. Everything stochastic is driven by ChaCha8 with documented seeding,
//! so runs are reproducible across platforms.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default refusal threshold for exhaustive enumeration (16.7M compositions).
/// Override with [`enumerate_all_with_cap`] or the
/// `COMPOSITION_RUNS_ENUM_CAP` environment variable.
pub const DEFAULT_ENUMERATION_CAP: u32 = 24;

/// A composition: a nonempty sequence of positive parts summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidComposition);
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Size of the composition (sum of its parts).
    pub fn n(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn largest_part(&self) -> u64 {
        *self.parts.iter().max().expect("nonempty")
    }

    /// Length `L` of the longest run of equal adjacent parts.
    pub fn longest_run(&self) -> u64 {
        let mut best = 1u64;
        let mut run = 1u64;
        for w in self.parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
                best = best.max(run);
            } else {
                run = 1;
            }
        }
        best
    }

    /// Length `L_r` of the longest run of the specific part `r`
    /// (0 if `r` does not occur).
    pub fn longest_run_of(&self, r: u64) -> u64 {
        let mut best = 0u64;
        let mut run = 0u64;
        for &p in &self.parts {
            if p == r {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    /// `L_r` for every `r = 1..=r_max` in a single pass.
    pub fn run_profile(&self, r_max: u64) -> Vec<u64> {
        let mut best = vec![0u64; r_max as usize];
        let mut i = 0;
        while i < self.parts.len() {
            let v = self.parts[i];
            let mut j = i + 1;
            while j < self.parts.len() && self.parts[j] == v {
                j += 1;
            }
            if v <= r_max {
                let slot = &mut best[(v - 1) as usize];
                *slot = (*slot).max((j - i) as u64);
            }
            i = j;
        }
        best
    }
}

/// Decodes a bar mask over the `n - 1` gaps into parts. Bit `i` of `mask`
/// set means a bar sits in gap `i` (between balls `i` and `i + 1`).
fn composition_from_mask(n: u32, mask: u64) -> Composition {
    let mut parts = Vec::new();
    let mut cur = 1u64;
    for i in 0..n.saturating_sub(1) {
        if (mask >> i) & 1 == 1 {
            parts.push(cur);
            cur = 1;
        } else {
            cur += 1;
        }
    }
    parts.push(cur);
    Composition { parts }
}

/// Iterator over all `2^(n-1)` compositions of `n`, each exactly once.
pub struct CompositionIter {
    n: u32,
    next: u64,
    end: u64,
}

impl Iterator for CompositionIter {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.next == self.end {
            return None;
        }
        let c = composition_from_mask(self.n, self.next);
        self.next += 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.end - self.next) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for CompositionIter {}

/// Enumeration cap: the `COMPOSITION_RUNS_ENUM_CAP` environment variable if
/// set, otherwise [`DEFAULT_ENUMERATION_CAP`].
pub fn enumeration_cap() -> u32 {
    std::env::var("COMPOSITION_RUNS_ENUM_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// Streams every composition of `n`, refusing `n` above the configured cap.
pub fn enumerate_all(n: u32) -> Result<CompositionIter> {
    enumerate_all_with_cap(n, enumeration_cap())
}

pub fn enumerate_all_with_cap(n: u32, cap: u32) -> Result<CompositionIter> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    Ok(CompositionIter {
        n,
        next: 0,
        end: 1u64 << (n - 1),
    })
}

/// Exact histogram `L = k -> count` over all compositions of `n`.
pub fn brute_distribution(n: u32) -> Result<BTreeMap<u64, u64>> {
    let mut hist = BTreeMap::new();
    for c in enumerate_all(n)? {
        *hist.entry(c.longest_run()).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Brute-force `C_n^<k>` (number of compositions with `L < k`) for
/// `k = 0..=k_max`, from the histogram.
pub fn brute_counts_below(n: u32, k_max: usize) -> Result<Vec<u64>> {
    let hist = brute_distribution(n)?;
    let mut counts = vec![0u64; k_max + 1];
    for k in 1..=k_max {
        counts[k] = counts[k - 1] + hist.get(&(k as u64 - 1)).copied().unwrap_or(0);
    }
    Ok(counts)
}

/// RNG for one simulation trial.
///
/// The generator is ChaCha8. The 32-byte key is derived from `seed` by
/// `SeedableRng::seed_from_u64` (a SplitMix64 expansion, stable across
/// platforms), and trial `t` uses ChaCha stream `t`, so trials can be
/// partitioned across workers in any order without changing results.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws a uniform composition of `n` via `n - 1` fair bar bits.
///
/// Bit `i` of the stream (bit `i % 64` of the `i / 64`-th `next_u64` word)
/// decides gap `i`. Every composition has probability exactly `2^-(n-1)`.
pub fn sample_composition(n: u64, rng: &mut impl RngCore) -> Composition {
    assert!(n >= 1, "composition size must be >= 1");
    let mut parts = Vec::new();
    let mut cur = 1u64;
    let gaps = n - 1;
    let mut word = 0u64;
    for i in 0..gaps {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        if (word >> (i % 64)) & 1 == 1 {
            parts.push(cur);
            cur = 1;
        } else {
            cur += 1;
        }
    }
    parts.push(cur);
    Composition { parts }
}

/// Default report breadth: `ceil(2 lg n) + 2`, past which parts of size `r`
/// almost surely do not occur.
pub fn default_r_max(n: u64) -> u32 {
    (2.0 * (n as f64).log2()).ceil() as u32 + 2
}

/// Aggregated Monte Carlo statistics for compositions of size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub r_max: u32,
    /// Sample mean of `L`.
    pub longest_run_mean: f64,
    /// `per_value_runs[r - 1]` is the sample mean of `L_r`.
    pub per_value_runs: Vec<f64>,
    /// Sample mean of the largest part.
    pub largest_part_mean: f64,
}

/// Runs `trials` independent samples and aggregates run statistics.
///
/// Trial `t` draws from [`trial_rng`]`(seed, t)`; aggregation is integer
/// sums, so any partition of the trial range over workers reproduces the
/// sequential report bit for bit.
pub fn simulate(n: u64, trials: u64, seed: u64, r_max: Option<u32>) -> SimulationReport {
    assert!(trials >= 1, "need at least one trial");
    let r_max = r_max.unwrap_or_else(|| default_r_max(n));
    let mut sum_l = 0u128;
    let mut sum_runs = vec![0u128; r_max as usize];
    let mut sum_largest = 0u128;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let c = sample_composition(n, &mut rng);
        sum_l += c.longest_run() as u128;
        sum_largest += c.largest_part() as u128;
        for (acc, lr) in sum_runs.iter_mut().zip(c.run_profile(r_max as u64)) {
            *acc += lr as u128;
        }
    }
    let mean = |s: u128| s as f64 / trials as f64;
    SimulationReport {
        n,
        trials,
        seed,
        r_max,
        longest_run_mean: mean(sum_l),
        per_value_runs: sum_runs.into_iter().map(mean).collect(),
        largest_part_mean: mean(sum_largest),
    }
}

/// One sampled composition reduced to its per-value run profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleProfile {
    pub n: u64,
    pub seed: u64,
    pub longest_run: u64,
    pub largest_part: u64,
    /// `runs[r - 1] = L_r` for this single composition.
    pub runs: Vec<u64>,
}

/// Samples a single composition (trial 0 of `seed`) and profiles it.
pub fn sample_profile(n: u64, seed: u64, r_max: u32) -> SampleProfile {
    let mut rng = trial_rng(seed, 0);
    let c = sample_composition(n, &mut rng);
    SampleProfile {
        n,
        seed,
        longest_run: c.longest_run(),
        largest_part: c.largest_part(),
        runs: c.run_profile(r_max as u64),
    }
}
