//! Achievable exponent pairs, Stein exponents and tradeoff curves for the
//! DSBS hypothesis-testing schemes.
//!
//! Schemes:
//! - unconstrained: the centralized threshold test on the noise weight;
//! - baseline: the unconstrained test on a rate-`R` fraction of the block;
//! - quantize-and-bin (one-sided constraint), with quantization noise weight
//!   `a`, decision threshold `theta` and bin rate `R_bin = 1 - h_b(a) - R_X`;
//! - syndrome binning without quantization (symmetric constraint), which is
//!   the quantize-and-bin scheme at `a = 0`.
//!
//! The older Stein bounds (quantization without binning, and with binning
//! under worst-case bin-error analysis) are included for comparison.

use serde::{Deserialize, Serialize};

use crate::binmath::{
    binary_convolution, binary_divergence, binary_entropy, check_range, check_unit, gv_distance,
};
use crate::error::{Error, Result};
use crate::exponents::{e_bb, e_best, e_bt};
use crate::optimize::{maximize, minimize, Search};

/// Offset keeping sweep thresholds inside the open interval, away from the
/// endpoints where one exponent is exactly zero.
pub const THRESHOLD_OFFSET: f64 = 1e-6;

const BIN_SEARCH: Search = Search::new(6, 1e-9);

/// The two noise levels: `Z ~ Ber(p0)` under `H0`, `Z ~ Ber(p1)` under `H1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisPair {
    pub p0: f64,
    pub p1: f64,
}

impl HypothesisPair {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        check_range("p0", p0, 0.0, 0.5)?;
        check_range("p1", p1, 0.0, 0.5)?;
        if p0 > p1 {
            return Err(Error::InvalidParams(format!(
                "need p0 <= p1, got p0 = {p0}, p1 = {p1}"
            )));
        }
        Ok(HypothesisPair { p0, p1 })
    }

    pub fn p(&self, hypothesis: usize) -> f64 {
        if hypothesis == 0 {
            self.p0
        } else {
            self.p1
        }
    }
}

/// Parameters of the quantize-and-bin scheme.
///
/// `time_share` is the fraction of the block the scheme runs on; the scheme
/// itself then operates at rate `r_x / time_share`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub a: f64,
    pub theta: f64,
    pub r_x: f64,
    pub time_share: f64,
}

impl SchemeParams {
    pub fn new(a: f64, theta: f64, r_x: f64) -> Self {
        SchemeParams {
            a,
            theta,
            r_x,
            time_share: 1.0,
        }
    }

    /// Rate of the scheme on the portion of the block it actually uses.
    pub fn effective_rate(&self) -> f64 {
        if self.time_share >= 1.0 {
            self.r_x
        } else {
            self.r_x / self.time_share
        }
    }

    /// Binning rate `1 - h_b(a) - R`, at the effective rate.
    pub fn r_bin(&self) -> f64 {
        bin_rate(self.a, self.effective_rate())
    }

    pub fn validate(&self, h: &HypothesisPair) -> Result<()> {
        check_unit("a", self.a)?;
        check_unit("theta", self.theta)?;
        check_unit("r_x", self.r_x)?;
        check_unit("time_share", self.time_share)?;
        if self.time_share == 0.0 {
            return Ok(());
        }
        let rate = self.effective_rate();
        if rate > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "rate {} over a fraction {} of the block exceeds 1",
                self.r_x, self.time_share
            )));
        }
        let a_max = gv_distance(rate.min(1.0));
        if self.a > a_max + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "quantization noise a = {} exceeds the covering limit {a_max} at rate {rate}",
                self.a
            )));
        }
        let lo = binary_convolution(self.a, h.p0);
        let hi = binary_convolution(self.a, h.p1);
        if self.theta < lo - 1e-12 || self.theta > hi + 1e-12 {
            return Err(Error::InvalidThreshold {
                theta: self.theta,
                lo,
                hi,
            });
        }
        Ok(())
    }
}

/// An achievable pair of error exponents under `H0` and `H1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub e0: f64,
    pub e1: f64,
}

impl ExponentPair {
    pub fn new(e0: f64, e1: f64) -> Self {
        ExponentPair { e0, e1 }
    }

    pub fn dominates(&self, other: &ExponentPair) -> bool {
        self.e0 >= other.e0 && self.e1 >= other.e1
    }
}

fn bin_rate(a: f64, rate: f64) -> f64 {
    (1.0 - binary_entropy(a) - rate).max(0.0)
}

fn check_open_threshold(h: &HypothesisPair, theta: f64) -> Result<f64> {
    if theta.is_finite() && theta >= h.p0 && theta <= h.p1 {
        Ok(theta)
    } else {
        Err(Error::InvalidThreshold {
            theta,
            lo: h.p0,
            hi: h.p1,
        })
    }
}

/// Centralized threshold test on the noise weight: `(d_b(θ||p0), d_b(θ||p1))`.
pub fn unconstrained_pair(h: &HypothesisPair, theta: f64) -> Result<ExponentPair> {
    let theta = check_open_threshold(h, theta)?;
    Ok(ExponentPair::new(
        binary_divergence(theta, h.p0),
        binary_divergence(theta, h.p1),
    ))
}

/// The unconstrained test applied to a fraction `R` of the block.
pub fn baseline_pair(h: &HypothesisPair, rate: f64, theta: f64) -> Result<ExponentPair> {
    let rate = check_unit("rate", rate)?;
    Ok(time_share(unconstrained_pair(h, theta)?, rate))
}

/// Scale an exponent pair by the block fraction `alpha`. The caller scales
/// the rates by `alpha` as well.
pub fn time_share(pair: ExponentPair, alpha: f64) -> ExponentPair {
    ExponentPair::new(alpha * pair.e0, alpha * pair.e1)
}

/// Stein exponent of quantization to `a = δ_GV(R)` without binning, with the
/// reconstruction treated as Bernoulli: `d_b(a*p0 || a*p1)`.
pub fn sigma_ac(h: &HypothesisPair, r_x: f64) -> f64 {
    let a = gv_distance(r_x);
    binary_divergence(binary_convolution(a, h.p0), binary_convolution(a, h.p1))
}

/// Stein exponent of quantization with noise of exact type `a`, no binning.
pub fn sigma_han(h: &HypothesisPair, a: f64) -> f64 {
    e_bt(h.p1, a, 0.0, binary_convolution(a, h.p0))
}

/// Worst-case bin-error term of the binning scheme: `R - h_b(a*p0) + h_b(a)`.
pub fn sigma_sha_term(rate: f64, a: f64, p0: f64) -> f64 {
    rate - binary_entropy(binary_convolution(a, p0)) + binary_entropy(a)
}

/// Outer search over the quantization noise `a in [0, δ_GV(R)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinSearch {
    pub a_cells: usize,
    pub tol: f64,
}

impl Default for SteinSearch {
    fn default() -> Self {
        SteinSearch {
            a_cells: 40,
            tol: 1e-10,
        }
    }
}

impl SteinSearch {
    fn search(&self) -> Search {
        Search::new(self.a_cells, self.tol)
    }
}

/// Stein exponent of quantize-and-bin with worst-case bin-error analysis,
/// `max_a min{σ_HAN(a), R - h_b(a*p0) + h_b(a)}`.
pub fn sigma_sha(h: &HypothesisPair, r_x: f64) -> f64 {
    sigma_sha_with(h, r_x, SteinSearch::default())
}

pub fn sigma_sha_with(h: &HypothesisPair, r_x: f64, search: SteinSearch) -> f64 {
    let a_max = gv_distance(r_x);
    maximize(
        |a| sigma_han(h, a).min(sigma_sha_term(r_x, a, h.p0)),
        0.0,
        a_max,
        search.search(),
    )
    .value
}

/// The better of the two older bounds at rate `r_x`:
/// `max{σ_HAN(δ_GV(R)), σ_SHA(R)}`.
pub fn prior_best_stein(h: &HypothesisPair, r_x: f64, search: SteinSearch) -> f64 {
    sigma_han(h, gv_distance(r_x)).max(sigma_sha_with(h, r_x, search))
}

/// Union-bound term of [`e_c`]: spectrum-weighted ball exponents of the
/// nonzero coarse codewords, minus the bin rate,
/// `min_{w >= δ_GV(R_bin)} [d_b(w||1/2) + E_BB(p1, a, w, θ)] - R_bin`.
///
/// The objective is convex in `w`. Without the spectrum constraint it is
/// minimized at `w* = (a*p1)*θ`, where a uniformly drawn center lands within
/// `θ` of the typical noise, and the minimum is `1 - h_b(θ)`. So the
/// constrained minimizer is `max(w*, δ_GV(R_bin))`.
pub fn e_c_union_term(p1: f64, a: f64, theta: f64, r_bin: f64) -> f64 {
    let free = binary_convolution(binary_convolution(a, p1), theta);
    let w = free.max(gv_distance(r_bin));
    binary_divergence(w, 0.5) + e_bb(p1, a, w, theta) - r_bin
}

/// [`e_c_union_term`] by numerical minimization over `w`.
pub fn e_c_union_term_by_search(p1: f64, a: f64, theta: f64, r_bin: f64) -> f64 {
    let lo = gv_distance(r_bin);
    let m = minimize(
        |w| binary_divergence(w, 0.5) + e_bb(p1, a, w, theta),
        lo,
        1.0,
        BIN_SEARCH,
    );
    m.value - r_bin
}

/// Exponent of deciding `H0` under `H1` after a bin-decoding error:
///
/// `max{ -R_bin + min_{w > δ_GV(R_bin)} [d_b(w||1/2) + E_BB(p1, a, w, θ)],
///       E(a*p1, R_bin) }`.
pub fn e_c(p1: f64, a: f64, theta: f64, r_bin: f64) -> f64 {
    let channel = e_best(binary_convolution(a, p1).min(0.5), r_bin);
    channel.max(e_c_union_term(p1, a, theta, r_bin)).max(0.0)
}

/// `min{cap, e_c(...)}`, skipping the union term when the channel exponent
/// already reaches `cap`.
fn e_c_capped(p1: f64, a: f64, theta: f64, r_bin: f64, cap: f64) -> f64 {
    let channel = e_best(binary_convolution(a, p1).min(0.5), r_bin);
    if channel >= cap {
        return cap;
    }
    cap.min(channel.max(e_c_union_term(p1, a, theta, r_bin)).max(0.0))
}

fn quantize_and_bin_pair(h: &HypothesisPair, a: f64, theta: f64, rate: f64) -> ExponentPair {
    let r_bin = bin_rate(a, rate);
    let e0 = e_bb(h.p0, a, 1.0, 1.0 - theta).min(e_best(binary_convolution(a, h.p0), r_bin));
    let e1 = e_c_capped(h.p1, a, theta, r_bin, e_bb(h.p1, a, 0.0, theta));
    ExponentPair::new(e0, e1)
}

/// Exponent pair of the quantize-and-bin scheme (one-sided rate constraint):
///
/// `E0 = min{E_BB(p0, a, 1, 1-θ), E(a*p0, R_bin)}`,
/// `E1 = min{E_BB(p1, a, 0, θ), E_c(p1, a, θ, R_bin)}`.
pub fn theorem1_pair(h: &HypothesisPair, params: &SchemeParams) -> Result<ExponentPair> {
    params.validate(h)?;
    if params.time_share == 0.0 {
        return Ok(ExponentPair::new(0.0, 0.0));
    }
    let pair = quantize_and_bin_pair(h, params.a, params.theta, params.effective_rate());
    Ok(time_share(pair, params.time_share))
}

/// Exponent pair of syndrome binning under a symmetric rate constraint `R`:
/// the quantize-and-bin pair at `a = 0`, `R_X = R`.
pub fn theorem2_pair(h: &HypothesisPair, rate: f64, theta: f64) -> Result<ExponentPair> {
    theorem1_pair(h, &SchemeParams::new(0.0, theta, rate))
}

/// Which ball exponent bounds the no-bin-error term of the Stein exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteinBound {
    /// Encoder that flags quantization noise not of weight `a`: `E_BT`.
    Flagged,
    /// Plain encoder, quantization noise anywhere in the ball: `E_BB`.
    Plain,
}

/// Which rate enters the bin-error exponent of the Stein bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinErrorRate {
    /// `R_bin = 1 - h_b(a) - R_X`, as in the full exponent pair.
    Bin,
    /// `R_X` itself.
    Source,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinOptions {
    pub bound: SteinBound,
    pub bin_rate: BinErrorRate,
    pub search: SteinSearch,
    /// Restrict to `a = 0` (binning without quantization).
    pub no_quantization: bool,
}

impl Default for SteinOptions {
    fn default() -> Self {
        SteinOptions {
            bound: SteinBound::Flagged,
            bin_rate: BinErrorRate::Bin,
            search: SteinSearch::default(),
            no_quantization: false,
        }
    }
}

/// Stein exponent of quantize-and-bin at quantization noise `a`.
pub fn theorem1_stein_at(h: &HypothesisPair, r_x: f64, a: f64, opts: &SteinOptions) -> f64 {
    let theta = binary_convolution(a, h.p0);
    let ball = match opts.bound {
        SteinBound::Flagged => e_bt(h.p1, a, 0.0, theta),
        SteinBound::Plain => e_bb(h.p1, a, 0.0, theta),
    };
    let rate = match opts.bin_rate {
        BinErrorRate::Bin => bin_rate(a, r_x),
        BinErrorRate::Source => r_x,
    };
    e_c_capped(h.p1, a, theta, rate, ball)
}

/// Stein exponent of quantize-and-bin at rate `r_x`:
/// `max_a min{E_BT(p1, a, 0, a*p0), E_c(p1, a, a*p0, R_bin)}`, together with
/// quantization without binning at `a = δ_GV(R_X)`.
pub fn theorem1_stein(h: &HypothesisPair, r_x: f64) -> f64 {
    theorem1_stein_with(h, r_x, &SteinOptions::default())
}

pub fn theorem1_stein_with(h: &HypothesisPair, r_x: f64, opts: &SteinOptions) -> f64 {
    if opts.no_quantization {
        return theorem1_stein_at(h, r_x, 0.0, opts);
    }
    let a_max = gv_distance(r_x);
    let binned = maximize(
        |a| theorem1_stein_at(h, r_x, a, opts),
        0.0,
        a_max,
        opts.search.search(),
    )
    .value;
    binned.max(sigma_han(h, a_max))
}

/// Stein exponent improved by time sharing: `max_{α in [R, 1]} α σ(R/α)`.
pub fn time_shared_stein<F: FnMut(f64) -> f64>(mut sigma: F, rate: f64, cells: usize) -> f64 {
    if rate >= 1.0 {
        return sigma(1.0);
    }
    if rate <= 0.0 {
        return 0.0;
    }
    maximize(
        |alpha| alpha * sigma((rate / alpha).min(1.0)),
        rate,
        1.0,
        Search::new(cells, 1e-9),
    )
    .value
}

/// Stein exponents of every scheme at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinRow {
    pub p0: f64,
    pub p1: f64,
    pub rate: f64,
    pub unconstrained: f64,
    pub baseline: f64,
    pub sigma_ac: f64,
    pub sigma_han: f64,
    pub sigma_sha: f64,
    pub prior_best: f64,
    pub theorem1: f64,
    pub theorem1_plain: f64,
    pub theorem1_no_quantization: f64,
}

/// Number of grid cells in the time-sharing search of [`stein_row`].
pub const STEIN_TIME_SHARE_CELLS: usize = 6;

/// All Stein exponents at `(h, rate)`. Every coded column is improved by time
/// sharing.
pub fn stein_row(h: &HypothesisPair, rate: f64, search: SteinSearch) -> SteinRow {
    let ts = |f: &dyn Fn(f64) -> f64| time_shared_stein(f, rate, STEIN_TIME_SHARE_CELLS);
    let flagged = SteinOptions {
        search,
        ..SteinOptions::default()
    };
    let plain = SteinOptions {
        bound: SteinBound::Plain,
        ..flagged
    };
    let no_q = SteinOptions {
        no_quantization: true,
        ..flagged
    };
    let unconstrained = binary_divergence(h.p0, h.p1);
    SteinRow {
        p0: h.p0,
        p1: h.p1,
        rate,
        unconstrained,
        baseline: rate * unconstrained,
        sigma_ac: ts(&|r| sigma_ac(h, r)),
        sigma_han: ts(&|r| sigma_han(h, gv_distance(r))),
        sigma_sha: ts(&|r| sigma_sha_with(h, r, search)),
        prior_best: ts(&|r| prior_best_stein(h, r, search)),
        theorem1: ts(&|r| theorem1_stein_with(h, r, &flagged)),
        theorem1_plain: ts(&|r| theorem1_stein_with(h, r, &plain)),
        theorem1_no_quantization: ts(&|r| theorem1_stein_with(h, r, &no_q)),
    }
}

/// Schemes with a full exponent tradeoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Unconstrained,
    Baseline,
    Theorem1,
    Theorem2,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Unconstrained,
        Scheme::Baseline,
        Scheme::Theorem1,
        Scheme::Theorem2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Unconstrained => "unconstrained",
            Scheme::Baseline => "baseline",
            Scheme::Theorem1 => "theorem1",
            Scheme::Theorem2 => "theorem2",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub pair: ExponentPair,
    pub params: SchemeParams,
}

/// Nondominated exponent pairs, sorted by increasing `E0` (so `E1` is
/// nonincreasing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub scheme: Scheme,
    pub points: Vec<CurvePoint>,
}

impl TradeoffCurve {
    pub fn from_points(scheme: Scheme, mut points: Vec<CurvePoint>) -> Self {
        points.retain(|p| p.pair.e0.is_finite() && p.pair.e1.is_finite());
        // sweep from the largest E0 down, keeping points that raise E1
        points.sort_by(|x, y| {
            y.pair
                .e0
                .total_cmp(&x.pair.e0)
                .then(y.pair.e1.total_cmp(&x.pair.e1))
        });
        let mut frontier: Vec<CurvePoint> = Vec::new();
        let mut best_e1 = f64::NEG_INFINITY;
        for p in points {
            if p.pair.e1 > best_e1 {
                best_e1 = p.pair.e1;
                frontier.push(p);
            }
        }
        frontier.reverse();
        TradeoffCurve {
            scheme,
            points: frontier,
        }
    }

    /// `E1` as a piecewise-linear function of `E0`; `None` outside the
    /// curve's `E0` range.
    pub fn e1_at(&self, e0: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        let last = pts.last()?;
        if e0 < first.pair.e0 || e0 > last.pair.e0 {
            return None;
        }
        let i = pts.partition_point(|p| p.pair.e0 < e0);
        if i == 0 {
            return Some(pts[0].pair.e1);
        }
        let (l, r) = (pts[i - 1].pair, pts[i].pair);
        if r.e0 == l.e0 {
            return Some(r.e1.max(l.e1));
        }
        let t = (e0 - l.e0) / (r.e0 - l.e0);
        Some(l.e1 + t * (r.e1 - l.e1))
    }

    /// Largest `|E1 difference|` between two curves, sampled at `samples`
    /// points of their common `E0` range.
    pub fn max_gap(&self, other: &TradeoffCurve, samples: usize) -> f64 {
        let (Some(a0), Some(a1), Some(b0), Some(b1)) = (
            self.points.first(),
            self.points.last(),
            other.points.first(),
            other.points.last(),
        ) else {
            return f64::INFINITY;
        };
        let lo = a0.pair.e0.max(b0.pair.e0);
        let hi = a1.pair.e0.min(b1.pair.e0);
        if hi < lo {
            return f64::INFINITY;
        }
        let samples = samples.max(2);
        (0..samples)
            .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
            .filter_map(|e0| Some((self.e1_at(e0)? - other.e1_at(e0)?).abs()))
            .fold(0.0, f64::max)
    }
}

/// Sampling of a tradeoff sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffOptions {
    /// Threshold points per sweep.
    pub resolution: usize,
    /// Quantization-noise points in `[0, δ_GV(R)]` for the quantized scheme.
    pub a_points: usize,
    /// Block fractions in `[R, 1]` for time sharing; `1` disables it.
    pub time_share_points: usize,
}

impl TradeoffOptions {
    pub fn new(resolution: usize) -> Self {
        TradeoffOptions {
            resolution,
            a_points: 24,
            time_share_points: 21,
        }
    }
}

fn thresholds(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    let (lo, hi) = (lo + THRESHOLD_OFFSET, hi - THRESHOLD_OFFSET);
    if hi <= lo {
        return vec![0.5 * (lo + hi)];
    }
    (0..resolution)
        .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
        .collect()
}

fn sweep_at_rate(
    scheme: Scheme,
    h: &HypothesisPair,
    rate: f64,
    opts: &TradeoffOptions,
) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    let a_values: Vec<f64> = match scheme {
        Scheme::Theorem1 => {
            let a_max = gv_distance(rate);
            let k = opts.a_points.max(2);
            (0..k).map(|i| a_max * i as f64 / (k - 1) as f64).collect()
        }
        _ => vec![0.0],
    };
    for a in a_values {
        let lo = binary_convolution(a, h.p0);
        let hi = binary_convolution(a, h.p1);
        for theta in thresholds(lo, hi, opts.resolution) {
            let params = SchemeParams::new(a, theta, rate);
            let pair = match scheme {
                Scheme::Unconstrained => ExponentPair::new(
                    binary_divergence(theta, h.p0),
                    binary_divergence(theta, h.p1),
                ),
                Scheme::Baseline => time_share(
                    ExponentPair::new(
                        binary_divergence(theta, h.p0),
                        binary_divergence(theta, h.p1),
                    ),
                    rate,
                ),
                Scheme::Theorem1 | Scheme::Theorem2 => quantize_and_bin_pair(h, a, theta, rate),
            };
            out.push(CurvePoint { pair, params });
        }
    }
    out
}

/// Tradeoff curve of a scheme at rate `rate`, with default sampling.
pub fn tradeoff_curve(
    scheme: Scheme,
    h: &HypothesisPair,
    rate: f64,
    resolution: usize,
) -> Result<TradeoffCurve> {
    tradeoff_curve_with(scheme, h, rate, &TradeoffOptions::new(resolution))
}

/// Tradeoff curve of a scheme: the Pareto frontier of all sampled exponent
/// pairs. Coded schemes are also run on a fraction `α` of the block at rate
/// `R/α`, with the resulting pairs scaled by `α`.
pub fn tradeoff_curve_with(
    scheme: Scheme,
    h: &HypothesisPair,
    rate: f64,
    opts: &TradeoffOptions,
) -> Result<TradeoffCurve> {
    check_unit("rate", rate)?;
    if opts.resolution < 2 {
        return Err(Error::InvalidParams("sweep resolution must be at least 2".into()));
    }
    if h.p0 == h.p1 {
        return Err(Error::InvalidParams("hypotheses coincide".into()));
    }
    let fractions: Vec<f64> = match scheme {
        Scheme::Theorem1 | Scheme::Theorem2 if rate > 0.0 && opts.time_share_points > 1 => {
            let k = opts.time_share_points;
            (0..k)
                .map(|i| 1.0 - (1.0 - rate) * i as f64 / (k - 1) as f64)
                .collect()
        }
        _ => vec![1.0],
    };
    let mut points = Vec::new();
    for alpha in fractions {
        let local = (rate / alpha).min(1.0);
        for mut p in sweep_at_rate(scheme, h, local, opts) {
            p.pair = time_share(p.pair, alpha);
            p.params.r_x = rate;
            p.params.time_share = alpha;
            points.push(p);
        }
    }
    Ok(TradeoffCurve::from_points(scheme, points))
}
