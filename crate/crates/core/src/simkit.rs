//! Monte Carlo simulation of the coded hypothesis tests on the DSBS.
//!
//! Each trial draws its randomness from its own ChaCha stream, derived from
//! the configured seed and the trial's index, so results do not depend on
//! evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binmath::{binary_entropy, check_unit};
use crate::error::{Error, Result};
use crate::gf2::{build_nested, BitVec, LinearCode, NestedCode};
use crate::regions::{HypothesisPair, SchemeParams};

/// Largest blocklength the simulator handles (single-word vectors).
pub const MAX_SIM_LEN: usize = 64;

const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimScheme {
    /// Quantize with the fine code, send the syndrome increment, decode in
    /// the coarse coset nearest to `Y`.
    OneSided,
    /// Both terminals send syndromes of one code; decode the noise from their
    /// sum.
    KornerMarton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    /// Trials per hypothesis.
    pub trials: usize,
    pub seed: u64,
    pub h: HypothesisPair,
    pub params: SchemeParams,
    pub scheme: SimScheme,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("at least one trial is required".into()));
        }
        if self.n == 0 || self.n > MAX_SIM_LEN {
            return Err(Error::ResourceLimit(format!(
                "simulation needs 1 <= n <= {MAX_SIM_LEN}, got {}",
                self.n
            )));
        }
        check_unit("theta", self.params.theta)?;
        if self.scheme == SimScheme::KornerMarton && self.params.a != 0.0 {
            return Err(Error::InvalidParams(
                "the symmetric scheme has no quantization (a must be 0)".into(),
            ));
        }
        Ok(())
    }

    /// Stream index of trial `i` under hypothesis `hyp`.
    fn stream(&self, hyp: u8, i: usize) -> u64 {
        2 * i as u64 + hyp as u64
    }
}

/// Outcome of one simulated test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub true_hypothesis: u8,
    pub bin_decoding_error: bool,
    pub decided: u8,
    /// `wt(Z) / n`.
    pub noise_weight_norm: f64,
    /// The decision statistic `Ŵ` (one-sided) or `W'` (symmetric).
    pub decoded_weight_norm: f64,
}

/// Decide `H1` iff the normalized weight exceeds `θ`.
pub fn threshold_decision(weight_norm: f64, theta: f64) -> u8 {
    u8::from(weight_norm > theta + 1e-12)
}

fn bernoulli_word<R: Rng>(rng: &mut R, n: usize, p: f64) -> u64 {
    let mut z = 0u64;
    for i in 0..n {
        if rng.random_bool(p) {
            z |= 1 << i;
        }
    }
    z
}

fn uniform_word<R: Rng>(rng: &mut R, n: usize) -> u64 {
    if n == 64 {
        rng.random()
    } else {
        rng.random::<u64>() & ((1u64 << n) - 1)
    }
}

/// Draw `(x, z)` for one trial from its stream.
fn draw<R: Rng>(rng: &mut R, n: usize, p: f64) -> (u64, u64) {
    let x = uniform_word(rng, n);
    let z = bernoulli_word(rng, n, p);
    (x, z)
}

/// One DSBS block: `x` uniform, `y = x ⊕ z` with `z ~ Ber(p)^n`.
pub fn gen_dsbs(n: usize, p: f64, seed: u64) -> Result<(BitVec, BitVec)> {
    check_unit("p", p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = BitVec::zeros(n);
    let mut y = BitVec::zeros(n);
    for i in 0..n {
        let xi = rng.random::<bool>();
        let zi = rng.random_bool(p);
        x.set(i, xi);
        y.set(i, xi ^ zi);
    }
    Ok((x, y))
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn for_each_trial<F: FnMut(u8, u64, u64) -> TrialRecord>(cfg: &SimConfig, mut trial: F) -> Vec<TrialRecord> {
    let mut out = Vec::with_capacity(2 * cfg.trials);
    for hyp in 0..2u8 {
        let p = cfg.h.p(hyp as usize);
        for i in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, cfg.stream(hyp, i));
            let (x, z) = draw(&mut rng, cfg.n, p);
            out.push(trial(hyp, x, z));
        }
    }
    out
}

fn check_blocklength(cfg: &SimConfig, n: usize) -> Result<()> {
    if n != cfg.n {
        return Err(Error::LengthMismatch {
            expected: cfg.n,
            got: n,
        });
    }
    Ok(())
}

/// Nested code for the one-sided scheme: fine rate `1 - h_b(a)`, coarse rate
/// `R_bin = 1 - h_b(a) - R_X`.
pub fn nested_for_params(n: usize, params: &SchemeParams, seed: u64) -> Result<NestedCode> {
    let r1 = 1.0 - binary_entropy(params.a);
    let r2 = (r1 - params.r_x).max(0.0);
    build_nested(n, r1, r2, seed)
}

/// Simulate the one-sided quantize-and-bin test.
///
/// Encoder: `U = Q_fine(X)`, send `Δs = U ΔH^T`. Decoder: `Û` is the member
/// of the coarse coset with syndrome `[0, Δs]` nearest to `Y`;
/// `Ŵ = wt(Y ⊕ Û) / n`, decide by threshold.
pub fn run_one_sided(cfg: &SimConfig, nested: &NestedCode) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    check_blocklength(cfg, nested.n())?;
    let n = cfg.n;
    let fine = nested.fine.word_ops()?;
    let coarse = nested.coarse.word_ops()?;
    let delta: Vec<u64> = nested.delta_h().rows().iter().map(|r| r.to_word()).collect();
    let offset = n - nested.fine.k();
    let theta = cfg.params.theta;
    Ok(for_each_trial(cfg, |hyp, x, z| {
        let y = x ^ z;
        let u = fine.quantize(x);
        let ds = delta
            .iter()
            .enumerate()
            .fold(0u64, |s, (j, &row)| s | ((row & u).count_ones() as u64 & 1) << j);
        let leader = coarse.leader(coarse.syndrome(y) ^ (ds << offset));
        let u_hat = y ^ leader;
        let w_hat = leader.count_ones() as f64 / n as f64;
        TrialRecord {
            true_hypothesis: hyp,
            bin_decoding_error: u_hat != u,
            decided: threshold_decision(w_hat, theta),
            noise_weight_norm: z.count_ones() as f64 / n as f64,
            decoded_weight_norm: w_hat,
        }
    }))
}

/// Simulate the symmetric-rate test: `Ẑ = leader(s_Y ⊕ s_X)`,
/// `W' = wt(Ẑ) / n`, decide by threshold.
pub fn run_korner_marton(cfg: &SimConfig, code: &LinearCode) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    check_blocklength(cfg, code.n())?;
    let n = cfg.n;
    let ops = code.word_ops()?;
    let theta = cfg.params.theta;
    Ok(for_each_trial(cfg, |hyp, x, z| {
        let y = x ^ z;
        let z_hat = ops.leader(ops.syndrome(y) ^ ops.syndrome(x));
        let w = z_hat.count_ones() as f64 / n as f64;
        TrialRecord {
            true_hypothesis: hyp,
            bin_decoding_error: z_hat != z,
            decided: threshold_decision(w, theta),
            noise_weight_norm: z.count_ones() as f64 / n as f64,
            decoded_weight_norm: w,
        }
    }))
}

/// Wilson score interval at 95%.
pub fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Empirical error rate of one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRate {
    pub trials: usize,
    pub errors: usize,
    pub estimate: f64,
    pub lower: f64,
    /// With no observed errors this is the rule-of-three bound `3 / trials`.
    pub upper: f64,
    pub bin_errors: usize,
}

impl ErrorRate {
    fn from_counts(trials: usize, errors: usize, bin_errors: usize) -> Self {
        let estimate = errors as f64 / trials as f64;
        let (lower, upper) = if errors == 0 {
            (0.0, (3.0 / trials as f64).min(1.0))
        } else {
            wilson_interval(errors, trials)
        };
        ErrorRate {
            trials,
            errors,
            estimate,
            lower,
            upper,
            bin_errors,
        }
    }

    /// Largest distance from the estimate to the interval ends.
    pub fn radius(&self) -> f64 {
        (self.upper - self.estimate).max(self.estimate - self.lower)
    }

    /// `-(1/n) log2 ε̂`; infinite when no error was observed.
    pub fn exponent(&self, n: usize) -> f64 {
        -self.estimate.log2() / n as f64
    }

    pub fn bin_error_rate(&self) -> f64 {
        self.bin_errors as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub eps0: ErrorRate,
    pub eps1: ErrorRate,
}

/// Error frequencies under each hypothesis, with 95% intervals.
pub fn estimate_errors(records: &[TrialRecord]) -> Result<ErrorEstimate> {
    let mut counts = [[0usize; 3]; 2];
    for r in records {
        let c = &mut counts[r.true_hypothesis as usize];
        c[0] += 1;
        c[1] += usize::from(r.decided != r.true_hypothesis);
        c[2] += usize::from(r.bin_decoding_error);
    }
    if counts[0][0] == 0 || counts[1][0] == 0 {
        return Err(Error::InvalidParams(
            "records from both hypotheses are required".into(),
        ));
    }
    let rate = |c: [usize; 3]| ErrorRate::from_counts(c[0], c[1], c[2]);
    Ok(ErrorEstimate {
        eps0: rate(counts[0]),
        eps1: rate(counts[1]),
    })
}

/// Histogram of `n · decoded weight` under one hypothesis.
pub fn decoded_weight_histogram(records: &[TrialRecord], hypothesis: u8, n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    for r in records.iter().filter(|r| r.true_hypothesis == hypothesis) {
        hist[(r.decoded_weight_norm * n as f64).round() as usize] += 1;
    }
    hist
}

/// Largest absolute gap between the empirical CDFs of two histograms.
pub fn max_cdf_gap(a: &[u64], b: &[u64]) -> f64 {
    let (ta, tb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let (mut ca, mut cb, mut gap) = (0.0, 0.0, 0.0f64);
    for i in 0..a.len().max(b.len()) {
        ca += *a.get(i).unwrap_or(&0) as f64 / ta;
        cb += *b.get(i).unwrap_or(&0) as f64 / tb;
        gap = gap.max((ca - cb).abs());
    }
    gap
}
