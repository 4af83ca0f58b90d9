//! Seeded Monte Carlo simulation of the stage game.
//!
//! Validates the exact enumeration and reports realized-outcome statistics.
//! The sample index space is partitioned into fixed-size chunks; each chunk
//! derives an independent RNG stream from `(seed, chunk index)` and chunk
//! summaries are reduced in chunk order, so results are bit-identical for a
//! given `(params, policy, rule, n, seed)` regardless of how many worker
//! threads rayon schedules.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::model::{
    investor_best_response, posterior_bad, posterior_good, BehaviorRule, FundChoice, ModelParams,
    SignalPolicy,
};
use crate::numfmt::fmt_g;
use crate::scalar::Real;

/// Plays per chunk. Fixed so the chunk partition depends only on `n`.
pub const CHUNK_SIZE: u64 = 16_384;

/// Accumulated sums for one chunk of plays.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChunkSummary<F> {
    /// Chunk index.
    pub chunk: u64,
    /// Plays in this chunk (the final chunk may be short).
    pub n: u64,
    /// Sum of realized sender payoffs.
    pub pm_sum: F,
    /// Sum of squared realized sender payoffs.
    pub pm_sumsq: F,
    /// Sum of realized investor payoffs (`θ - c` when funding, else 0).
    pub investor_sum: F,
    /// Plays funding project A.
    pub a_count: u64,
    /// Plays funding project B.
    pub b_count: u64,
    /// Plays funding nothing.
    pub none_count: u64,
}

/// Relative funding frequencies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FundingFrequencies<F> {
    pub fund_a: F,
    pub fund_b: F,
    pub fund_none: F,
}

/// Simulation summary statistics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimStats<F> {
    /// Sample count.
    pub n: u64,
    /// Mean realized sender payoff.
    pub pm_mean: F,
    /// Standard error of `pm_mean` (sample standard deviation / sqrt(n)).
    pub pm_se: F,
    /// Relative frequencies of the three funding choices.
    pub fund_freq: FundingFrequencies<F>,
    /// Mean realized investor payoff under the reporting convention
    /// `θ - c` when funding, else 0. Not used for decisions.
    pub investor_mean: F,
    /// Master seed the run was derived from.
    pub seed: u64,
    /// True when `n = 1`, where the standard error is undefined and
    /// reported as 0.
    pub degenerate_sample: bool,
}

/// SplitMix64 mix of the master seed and a chunk index.
fn chunk_seed(master: u64, chunk: u64) -> u64 {
    let mut z = master.wrapping_add((chunk.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `n` independent plays and returns per-chunk sums in chunk order.
///
/// Each play draws the two project states, then the two signals, and the
/// investor responds to the analytic posteriors for the realized signal
/// pair. Four uniforms are consumed per play regardless of branching.
pub fn simulate_chunks<F: Real>(
    params: &ModelParams<F>,
    policy: &SignalPolicy<F>,
    rule: &BehaviorRule<F>,
    n: u64,
    seed: u64,
) -> Vec<ChunkSummary<F>> {
    assert!(n >= 1, "simulation needs at least one play");
    let (p, c) = (params.p(), params.c());
    let (mu_a, mu_b) = (params.mu_a(), params.mu_b());

    // The investor's response depends only on the realized signal pair.
    let q_a = posterior_good(p, policy.sigma_a());
    let q_b = posterior_good(p, policy.sigma_b());
    let action_for = |s_a: bool, s_b: bool| {
        investor_best_response(
            if s_a { q_a } else { posterior_bad() },
            if s_b { q_b } else { posterior_bad() },
            rule,
        )
        .choice
    };
    let actions = [
        [action_for(false, false), action_for(false, true)],
        [action_for(true, false), action_for(true, true)],
    ];

    let p64 = p.to_f64().expect("prior converts to f64");
    let miss_a = (F::one() - policy.sigma_a())
        .to_f64()
        .expect("accuracy converts");
    let miss_b = (F::one() - policy.sigma_b())
        .to_f64()
        .expect("accuracy converts");

    let num_chunks = n.div_ceil(CHUNK_SIZE);
    (0..num_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK_SIZE;
            let len = CHUNK_SIZE.min(n - start);
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, chunk));
            let mut pm_sum = F::zero();
            let mut pm_sumsq = F::zero();
            let mut investor_sum = F::zero();
            let (mut a_count, mut b_count, mut none_count) = (0u64, 0u64, 0u64);
            for _ in 0..len {
                let theta_a = rng.random::<f64>() < p64;
                let theta_b = rng.random::<f64>() < p64;
                let u_a = rng.random::<f64>();
                let u_b = rng.random::<f64>();
                let s_a = theta_a || u_a < miss_a;
                let s_b = theta_b || u_b < miss_b;
                let (pm, inv) = match actions[s_a as usize][s_b as usize] {
                    FundChoice::FundA => {
                        a_count += 1;
                        let ret = if theta_a { F::one() } else { F::zero() };
                        (ret - c + mu_a, ret - c)
                    }
                    FundChoice::FundB => {
                        b_count += 1;
                        let ret = if theta_b { F::one() } else { F::zero() };
                        (ret - c + mu_b, ret - c)
                    }
                    FundChoice::FundNone => {
                        none_count += 1;
                        (F::zero(), F::zero())
                    }
                };
                pm_sum = pm_sum + pm;
                pm_sumsq = pm_sumsq + pm * pm;
                investor_sum = investor_sum + inv;
            }
            ChunkSummary {
                chunk,
                n: len,
                pm_sum,
                pm_sumsq,
                investor_sum,
                a_count,
                b_count,
                none_count,
            }
        })
        .collect()
}

/// Runs the simulation and reduces the chunk summaries into [`SimStats`].
///
/// Identical inputs reproduce bit-identical stats regardless of worker
/// count.
pub fn simulate<F: Real>(
    params: &ModelParams<F>,
    policy: &SignalPolicy<F>,
    rule: &BehaviorRule<F>,
    n: u64,
    seed: u64,
) -> SimStats<F> {
    let chunks = simulate_chunks(params, policy, rule, n, seed);
    reduce_chunks(&chunks, n, seed)
}

/// Deterministic in-order reduction of chunk summaries.
pub fn reduce_chunks<F: Real>(chunks: &[ChunkSummary<F>], n: u64, seed: u64) -> SimStats<F> {
    let mut pm_sum = F::zero();
    let mut pm_sumsq = F::zero();
    let mut investor_sum = F::zero();
    let (mut a_count, mut b_count, mut none_count) = (0u64, 0u64, 0u64);
    for ch in chunks {
        pm_sum = pm_sum + ch.pm_sum;
        pm_sumsq = pm_sumsq + ch.pm_sumsq;
        investor_sum = investor_sum + ch.investor_sum;
        a_count += ch.a_count;
        b_count += ch.b_count;
        none_count += ch.none_count;
    }
    let n_f = F::from_u64(n).expect("sample count converts");
    let pm_mean = pm_sum / n_f;
    let degenerate_sample = n == 1;
    let pm_se = if degenerate_sample {
        F::zero()
    } else {
        let var = ((pm_sumsq - pm_sum * pm_sum / n_f) / (n_f - F::one())).max(F::zero());
        (var / n_f).sqrt()
    };
    SimStats {
        n,
        pm_mean,
        pm_se,
        fund_freq: FundingFrequencies {
            fund_a: F::from_u64(a_count).expect("count converts") / n_f,
            fund_b: F::from_u64(b_count).expect("count converts") / n_f,
            fund_none: F::from_u64(none_count).expect("count converts") / n_f,
        },
        investor_mean: investor_sum / n_f,
        seed,
        degenerate_sample,
    }
}

/// Writes the per-chunk trace as CSV.
pub fn write_chunk_trace_csv<F: Real, W: Write>(
    w: &mut W,
    chunks: &[ChunkSummary<F>],
) -> io::Result<()> {
    writeln!(w, "chunk,n,pm_sum,pm_sumsq,a_count,b_count,none_count")?;
    for ch in chunks {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            ch.chunk,
            ch.n,
            fmt_g(ch.pm_sum),
            fmt_g(ch.pm_sumsq),
            ch.a_count,
            ch.b_count,
            ch.none_count
        )?;
    }
    Ok(())
}
