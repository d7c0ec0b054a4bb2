//! Exponent functionals: BSC channel exponents and the mixed-noise Hamming
//! sphere/ball exponents.
//!
//! The mixed-noise exponents are large-deviation rates for the weight of
//! `c ⊕ U ⊕ Z`, where `c` is a fixed center of normalized weight `w`, `U` is
//! uniform over a type class (or a Hamming ball) of normalized radius `a`, and
//! `Z` is i.i.d. Bernoulli(`p`).
//!
//! Every nested minimization here is over a jointly convex objective (the
//! entropy terms enter through perspectives of `-h_b`, the divergence terms
//! through perspectives of `d_b(·||p)`), so each level is a convex 1-D search:
//! a short bracketing grid followed by golden-section refinement suffices.

use serde::{Deserialize, Serialize};

use crate::binmath::{
    binary_convolution, binary_divergence, binary_entropy, check_range, check_unit,
};
use crate::error::Result;
use crate::optimize::{maximize, minimize, Search};

const EPS: f64 = 1e-12;

/// Upper end of the `rho` search for the expurgated exponent. The supremum
/// over `rho >= 1` is unbounded in principle; for `R > 0` the maximizer is
/// finite and, for the rates used here, far below this cap.
pub const EXPURGATED_RHO_MAX: f64 = 1e4;

const INNER: Search = Search::new(6, 1e-9);
const CHANNEL: Search = Search::new(16, 1e-10);

/// Parameters of a mixed-noise ball or sphere exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallExponentQuery {
    pub p: f64,
    pub a: f64,
    pub w: f64,
    pub theta: f64,
}

impl BallExponentQuery {
    pub fn new(p: f64, a: f64, w: f64, theta: f64) -> Result<Self> {
        Ok(BallExponentQuery {
            p: check_unit("p", p)?,
            a: check_unit("a", a)?,
            w: check_unit("w", w)?,
            theta: check_unit("theta", theta)?,
        })
    }

    pub fn e_sphere(&self) -> f64 {
        e_sphere(self.p, self.a, self.w, self.theta)
    }

    pub fn e_bt(&self) -> f64 {
        e_bt(self.p, self.a, self.w, self.theta)
    }

    pub fn e_bb(&self) -> f64 {
        e_bb(self.p, self.a, self.w, self.theta)
    }
}

/// Parameters of a BSC channel exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelExponentQuery {
    pub p: f64,
    pub rate: f64,
}

impl ChannelExponentQuery {
    pub fn new(p: f64, rate: f64) -> Result<Self> {
        Ok(ChannelExponentQuery {
            p: check_range("p", p, 0.0, 0.5)?,
            rate: check_unit("rate", rate)?,
        })
    }

    pub fn e_random_coding(&self) -> f64 {
        e_random_coding(self.p, self.rate)
    }

    pub fn e_expurgated(&self) -> f64 {
        e_expurgated(self.p, self.rate)
    }

    pub fn e_best(&self) -> f64 {
        e_best(self.p, self.rate)
    }
}

/// `total * h_b(part / total)`, extended by continuity to `total = 0`.
#[inline]
fn scaled_entropy(part: f64, total: f64) -> f64 {
    if total <= EPS {
        0.0
    } else {
        total * binary_entropy((part / total).clamp(0.0, 1.0))
    }
}

/// `total * d_b(part / total || p)`; a zero-length block only admits `part = 0`.
#[inline]
fn scaled_divergence(part: f64, total: f64, p: f64) -> f64 {
    if total <= EPS {
        if part.abs() <= 1e-9 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        total * binary_divergence((part / total).clamp(0.0, 1.0), p)
    }
}

/// Exponent of `P(W1 - W2 = n tau)` for independent `W1 ~ Bin(n alpha, p)` and
/// `W2 ~ Bin(n beta, p)`:
///
/// `min_x alpha d_b(x/alpha || p) + beta d_b((x - tau)/beta || p)` over
/// `x in [max(0, tau), min(alpha, beta + tau)]`.
///
/// Returns `+inf` when the interval is empty.
pub fn e_weight_diff(p: f64, alpha: f64, beta: f64, tau: f64) -> f64 {
    let alpha = alpha.max(0.0);
    let beta = beta.max(0.0);
    let lo = tau.max(0.0);
    let mut hi = alpha.min(beta + tau);
    if lo > hi + EPS {
        return f64::INFINITY;
    }
    hi = hi.max(lo);
    let objective =
        |x: f64| scaled_divergence(x, alpha, p) + scaled_divergence(x - tau, beta, p);
    if hi - lo <= EPS {
        return objective(lo);
    }
    if p <= 0.0 || p >= 1.0 {
        // only the degenerate points can be finite
        return objective(lo).min(objective(hi));
    }
    // The objective is convex with derivative
    //   log2[x (x - tau) (1-p)^2 / ((alpha - x)(beta + tau - x) p^2)],
    // running from -inf at `lo` to +inf at `hi`; its unique zero solves
    //   (1 - r) x^2 + (r (alpha + beta + tau) - tau) x - r alpha (beta + tau) = 0
    // with r = (p / (1 - p))^2.
    let odds = p / (1.0 - p);
    let r = odds * odds;
    let qa = 1.0 - r;
    let qb = r * (alpha + beta + tau) - tau;
    let qc = -r * alpha * (beta + tau);
    let root = if qa.abs() < 1e-14 {
        -qc / qb
    } else if qa > 0.0 {
        // qc <= 0: the roots straddle zero and the feasible one is the larger
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        if qb > 0.0 {
            2.0 * qc / (-qb - disc)
        } else {
            (-qb + disc) / (2.0 * qa)
        }
    } else {
        // p > 1/2: pick whichever root lands in the interval
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        let r1 = (-qb + disc) / (2.0 * qa);
        let r2 = (-qb - disc) / (2.0 * qa);
        if (lo..=hi).contains(&r1) {
            r1
        } else {
            r2
        }
    };
    let x = if root.is_finite() {
        root.clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    objective(x)
}

/// Exponent of `P(wt(c ⊕ U ⊕ Z) = n tau)` with `U` uniform over the type
/// class of weight `a`, `c` of weight `w`, `Z` Bernoulli(`p`).
///
/// Minimizes over the normalized overlap `gamma` between `c` and `U`.
pub fn e_sphere(p: f64, a: f64, w: f64, tau: f64) -> f64 {
    let lo = (a + w - 1.0).max(0.0);
    let hi = w.min(a);
    if lo > hi + EPS {
        return f64::INFINITY;
    }
    let hi = hi.max(lo);
    let ha = binary_entropy(a);
    let objective = |gamma: f64| {
        let gamma = gamma.clamp(lo, hi);
        let entropy = ha - scaled_entropy(gamma, w) - scaled_entropy(a - gamma, 1.0 - w);
        // weight of c ⊕ U
        let s = (w + a - 2.0 * gamma).clamp(0.0, 1.0);
        entropy.max(0.0) + e_weight_diff(p, 1.0 - s, s, tau - s)
    };
    if p <= 0.0 || p >= 1.0 {
        // Z is deterministic, so the weight of c ⊕ U is pinned
        let s = if p <= 0.0 { tau } else { 1.0 - tau };
        let gamma = 0.5 * (w + a - s);
        if gamma < lo - EPS || gamma > hi + EPS {
            return f64::INFINITY;
        }
        return objective(gamma);
    }
    minimize(objective, lo, hi, INNER).value
}

/// The typical normalized weight of `c ⊕ U ⊕ Z`: `w * a * p`.
pub fn typical_weight(p: f64, a: f64, w: f64) -> f64 {
    binary_convolution(binary_convolution(w, a), p)
}

/// Ball exponent `E_BT(p, a, w, theta)`: the best sphere exponent over
/// radii `tau in [0, theta]`.
///
/// `e_sphere` is convex in `tau` and vanishes at the typical weight, so the
/// minimum over `[0, theta]` sits at `min(theta, typical weight)`.
pub fn e_bt(p: f64, a: f64, w: f64, theta: f64) -> f64 {
    let typical = typical_weight(p, a, w);
    if theta >= typical {
        return 0.0;
    }
    e_sphere(p, a, w, theta.max(0.0))
}

/// Ball exponent with the radius minimization carried out numerically rather
/// than through the typical-weight shortcut. Slow; used for cross-checks.
pub fn e_bt_by_search(p: f64, a: f64, w: f64, theta: f64, search: Search) -> f64 {
    minimize(|tau| e_sphere(p, a, w, tau), 0.0, theta, search).value
}

/// Exponent `E_BB(p, a, w, theta)` for noise uniform over a Hamming ball of
/// radius `a` (rather than a type class):
///
/// `h_b(a) + min_{r in [0,a]} [ -h_b(r) + E_BT(p, r, w, theta) ]`.
///
/// The ball of radius `a <= 1/2` has `≐ 2^{n h_b(a)}` points, of which the
/// shell at radius `r` holds `≐ 2^{n h_b(r)}`.
pub fn e_bb(p: f64, a: f64, w: f64, theta: f64) -> f64 {
    let volume = binary_entropy(a.min(0.5));
    let m = minimize(
        |r| e_bt(p, r, w, theta) - binary_entropy(r.min(0.5)),
        0.0,
        a,
        INNER,
    );
    (volume + m.value).max(0.0)
}

/// `E_0(rho) - rho R` for the BSC, where `E_0` is Gallager's function.
fn gallager_objective(p: f64, rate: f64, rho: f64) -> f64 {
    let s = 1.0 / (1.0 + rho);
    let sum = p.powf(s) + (1.0 - p).powf(s);
    rho - (1.0 + rho) * sum.log2() - rho * rate
}

/// Random-coding exponent of the BSC(`p`) at rate `rate`.
pub fn e_random_coding(p: f64, rate: f64) -> f64 {
    if rate >= 1.0 {
        return 0.0;
    }
    let m = maximize(|rho| gallager_objective(p, rate, rho), 0.0, 1.0, CHANNEL);
    m.value.max(0.0)
}

/// `E_x(rho) - rho R` for the BSC, evaluated without cancellation for
/// large `rho`.
fn expurgated_objective(p: f64, rate: f64, rho: f64) -> f64 {
    let z = 2.0 * (p * (1.0 - p)).sqrt();
    let ex = if z <= 0.0 {
        // noiseless channel: -rho log2(1/2)
        rho
    } else {
        // log2(1/2 + z^{1/rho}/2) = log2(1 + (z^{1/rho} - 1)/2)
        let t = (z.ln() / rho).exp_m1() * 0.5;
        -rho * t.ln_1p() / std::f64::consts::LN_2
    };
    ex - rho * rate
}

/// Maximizing `rho` of the expurgated exponent, searched on a log scale over
/// `[1, EXPURGATED_RHO_MAX]`.
pub fn expurgated_maximizer(p: f64, rate: f64) -> f64 {
    let top = EXPURGATED_RHO_MAX.ln();
    let m = maximize(
        |t| expurgated_objective(p, rate, t.exp()),
        0.0,
        top,
        Search::new(64, 1e-10),
    );
    m.x.exp()
}

/// Expurgated exponent of the BSC(`p`) at rate `rate`.
pub fn e_expurgated(p: f64, rate: f64) -> f64 {
    let rho = expurgated_maximizer(p, rate);
    expurgated_objective(p, rate, rho)
}

/// Best known BSC exponent `max{E_r, E_ex}`, clamped below at zero.
pub fn e_best(p: f64, rate: f64) -> f64 {
    if rate >= 1.0 - binary_entropy(p) {
        // both exponents vanish at and above capacity
        return 0.0;
    }
    e_random_coding(p, rate).max(e_expurgated(p, rate)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense-grid minimum of the weight-difference objective.
    fn e_weight_diff_grid(p: f64, alpha: f64, beta: f64, tau: f64, step: f64) -> f64 {
        let lo = tau.max(0.0);
        let hi = alpha.min(beta + tau);
        let steps = ((hi - lo) / step).ceil() as usize;
        (0..=steps)
            .map(|i| (lo + i as f64 * step).min(hi))
            .map(|x| {
                alpha * binary_divergence(x / alpha, p) + beta * binary_divergence((x - tau) / beta, p)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn weight_diff_single_block() {
        for &(p, theta) in &[(0.1, 0.05), (0.25, 0.1), (0.3, 0.3)] {
            let v = e_weight_diff(p, 1.0, 0.0, theta);
            assert!((v - binary_divergence(theta, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_diff_vanishes_at_typical_difference() {
        for &(p, alpha, beta) in &[(0.1, 0.6, 0.4), (0.25, 0.3, 0.7), (0.4, 0.5, 0.5)] {
            let tau = (alpha - beta) * p;
            assert!(e_weight_diff(p, alpha, beta, tau).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_diff_matches_dense_grid() {
        let grid = e_weight_diff_grid(0.1, 0.6, 0.4, 0.3, 1e-6);
        let v = e_weight_diff(0.1, 0.6, 0.4, 0.3);
        assert!(v <= grid + 1e-12);
        assert!((v - grid).abs() < 1e-8, "{v} vs {grid}");
        for &(p, alpha, beta, tau) in &[
            (0.25, 0.5, 0.5, -0.2),
            (0.05, 0.9, 0.1, 0.4),
            (0.4, 0.2, 0.8, 0.1),
            (0.5, 0.7, 0.3, 0.0),
        ] {
            let grid = e_weight_diff_grid(p, alpha, beta, tau, 1e-6);
            let v = e_weight_diff(p, alpha, beta, tau);
            assert!((v - grid).abs() < 1e-8, "{p} {alpha} {beta} {tau}: {v} vs {grid}");
        }
    }

    #[test]
    fn weight_diff_infeasible() {
        assert_eq!(e_weight_diff(0.1, 0.3, 0.2, 0.5), f64::INFINITY);
        assert_eq!(e_weight_diff(0.1, 0.3, 0.2, -0.25), f64::INFINITY);
    }

    #[test]
    fn sphere_without_type_noise_is_bernoulli_type_exponent() {
        for &(p, tau) in &[(0.1, 0.05), (0.25, 0.4), (0.11, 0.11)] {
            let v = e_sphere(p, 0.0, 0.0, tau);
            assert!((v - binary_divergence(tau, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_is_nonnegative() {
        for &p in &[0.05, 0.25, 0.45] {
            for i in 0..=10 {
                for j in 0..=10 {
                    let (a, w) = (i as f64 / 20.0, j as f64 / 10.0);
                    for k in 0..=10 {
                        assert!(e_sphere(p, a, w, k as f64 / 10.0) >= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_matches_joint_grid() {
        // brute force over (gamma, x) for the sphere exponent
        let (p, a, w, tau) = (0.1, 0.2, 0.3, 0.25);
        let mut best = f64::INFINITY;
        let g_lo = (a + w - 1.0f64).max(0.0);
        let g_hi = w.min(a);
        let steps = 2000;
        for i in 0..=steps {
            let gamma = g_lo + (g_hi - g_lo) * i as f64 / steps as f64;
            let s = w + a - 2.0 * gamma;
            let ent = binary_entropy(a)
                - w * binary_entropy(gamma / w)
                - (1.0 - w) * binary_entropy((a - gamma) / (1.0 - w));
            let inner = e_weight_diff_grid(p, 1.0 - s, s, tau - s, 1e-4);
            best = best.min(ent + inner);
        }
        let v = e_sphere(p, a, w, tau);
        assert!(v <= best + 1e-9);
        assert!((v - best).abs() < 1e-5, "{v} vs {best}");
    }

    #[test]
    fn ball_exponent_bernoulli_cases() {
        for &(p, theta) in &[(0.25, 0.1), (0.11, 0.02), (0.4, 0.3)] {
            assert!((e_bt(p, 0.0, 0.0, theta) - binary_divergence(theta, p)).abs() < 1e-12);
            assert_eq!(e_bt(p, 0.0, 0.0, p + 0.01), 0.0);
        }
    }

    #[test]
    fn ball_exponent_zero_above_typical_weight() {
        for &(p, a) in &[(0.1, 0.2), (0.25, 0.05), (0.3, 0.3)] {
            let t = binary_convolution(a, p);
            assert_eq!(e_bt(p, a, 0.0, t), 0.0);
            assert_eq!(e_bt(p, a, 0.0, t + 0.05), 0.0);
            assert!(e_bt(p, a, 0.0, t - 0.05) > 0.0);
        }
    }

    #[test]
    fn ball_shortcut_matches_radius_search() {
        for &(p, a, w, theta) in &[
            (0.25, 0.1, 0.0, 0.12),
            (0.1, 0.2, 0.3, 0.15),
            (0.25, 0.15, 0.4, 0.2),
            (0.05, 0.1, 0.6, 0.3),
            (0.3, 0.05, 0.9, 0.7),
        ] {
            let fast = e_bt(p, a, w, theta);
            let slow = e_bt_by_search(p, a, w, theta, Search::new(400, 1e-10));
            assert!((fast - slow).abs() < 1e-8, "{p} {a} {w} {theta}: {fast} vs {slow}");
        }
    }

    #[test]
    fn ball_monotone_in_radius_and_center_weight() {
        let (p, a) = (0.2, 0.1);
        for j in 0..=5 {
            let w = j as f64 / 10.0;
            let mut prev = f64::INFINITY;
            for k in 0..=20 {
                let theta = k as f64 / 40.0;
                let v = e_bt(p, a, w, theta);
                let vb = e_bb(p, a, w, theta);
                assert!(v <= prev + 1e-9);
                assert!(vb <= v + 1e-9);
                assert!(v.is_finite() && v >= 0.0 && vb >= 0.0);
                prev = v;
            }
        }
        for k in 1..10 {
            let theta = k as f64 / 40.0;
            let mut prev_bt = -1.0;
            let mut prev_bb = -1.0;
            for j in 0..=10 {
                let w = j as f64 / 20.0;
                let bt = e_bt(p, a, w, theta);
                let bb = e_bb(p, a, w, theta);
                assert!(bt >= prev_bt - 1e-9, "e_bt not monotone in w at {w}, {theta}");
                assert!(bb >= prev_bb - 1e-9, "e_bb not monotone in w at {w}, {theta}");
                prev_bt = bt;
                prev_bb = bb;
            }
        }
    }

    #[test]
    fn ball_uniform_noise_without_radius_equals_type_noise() {
        for &(p, w, theta) in &[(0.25, 0.0, 0.1), (0.1, 0.4, 0.2)] {
            assert_eq!(e_bb(p, 0.0, w, theta), e_bt(p, 0.0, w, theta));
        }
    }

    #[test]
    fn ball_noise_matches_shell_grid() {
        let (p, a, w, theta) = (0.25, 0.15, 0.4, 0.2);
        let steps = (a / 1e-4_f64).round() as usize;
        let grid = (0..=steps)
            .map(|i| a * i as f64 / steps as f64)
            .map(|r| binary_entropy(a) - binary_entropy(r) + e_bt(p, r, w, theta))
            .fold(f64::INFINITY, f64::min);
        let v = e_bb(p, a, w, theta);
        assert!(v <= grid + 1e-10);
        assert!((v - grid).abs() < 1e-6, "{v} vs {grid}");
    }

    #[test]
    fn random_coding_vanishes_at_capacity() {
        for &p in &[0.05, 0.11, 0.25, 0.4] {
            let c = 1.0 - binary_entropy(p);
            assert!(e_random_coding(p, c).abs() <= 1e-6);
            assert!(e_best(p, c).abs() <= 1e-6);
            assert_eq!(e_random_coding(p, 1.0), 0.0);
        }
    }

    #[test]
    fn random_coding_matches_rho_grid() {
        let (p, r) = (0.11, 0.2);
        let grid = (0..=100_000)
            .map(|i| gallager_objective(p, r, i as f64 * 1e-5))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((e_random_coding(p, r) - grid).abs() < 1e-9);
    }

    #[test]
    fn expurgation_wins_at_low_rate() {
        assert!(e_expurgated(0.11, 0.01) > e_random_coding(0.11, 0.01));
        let rho = expurgated_maximizer(0.11, 0.01);
        assert!(rho > 1.0 && rho < EXPURGATED_RHO_MAX / 10.0);
    }

    #[test]
    fn expurgated_is_nonincreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let v = e_expurgated(0.11, i as f64 / 200.0);
            assert!(v <= prev + 1e-9);
            prev = v;
        }
        // at capacity the expurgated branch is dominated
        let c = 1.0 - binary_entropy(0.11);
        assert!(e_expurgated(0.11, c) <= 0.0);
    }

    #[test]
    fn best_exponent_near_zero_rate() {
        let p: f64 = 0.11;
        let zero_rate = -0.5 * (2.0 * (p * (1.0 - p)).sqrt()).log2();
        let v = e_best(p, 1e-6);
        assert!(v < zero_rate && zero_rate - v < 1e-3, "{v} vs {zero_rate}");
        let v = e_best(p, 0.3);
        assert_eq!(v, e_random_coding(p, 0.3).max(e_expurgated(p, 0.3)));
    }

    #[test]
    fn best_exponent_zero_iff_above_capacity() {
        for &p in &[0.05, 0.11, 0.25] {
            let c = 1.0 - binary_entropy(p);
            for i in 0..=50 {
                let r = i as f64 / 50.0;
                let v = e_best(p, r);
                if r < c - 1e-3 {
                    assert!(v > 1e-6, "p={p} r={r}");
                } else if r >= c {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }
}
