//! Exact finite-length probabilities: the weight law of `c ⊕ U ⊕ Z` and the
//! error probabilities of the centralized threshold test.
//!
//! With `U` uniform over the weight-`na` vectors, `c` of weight `nw` and
//! `Z ~ Ber(p)^n`, condition on the overlap `m = |supp(c) ∩ supp(U)|`, which
//! is hypergeometric. Then `c ⊕ U` has weight `s = nw + na - 2m`, and the
//! weight of `c ⊕ U ⊕ Z` is `Bin(n - s, p) + Bin(s, 1 - p)`. All sums are
//! evaluated in the log domain.

use serde::{Deserialize, Serialize};

use crate::binmath::check_unit;
use crate::error::{Error, Result};

/// Counts defining an exact mixed-noise probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactPmfQuery {
    pub n: usize,
    /// Weight of the type-class noise `U`.
    pub a_count: usize,
    /// Weight of the center `c`.
    pub w_count: usize,
    /// Target weight (or ball radius) of `c ⊕ U ⊕ Z`.
    pub t_count: usize,
    pub p: f64,
}

impl ExactPmfQuery {
    pub fn new(n: usize, a_count: usize, w_count: usize, t_count: usize, p: f64) -> Result<Self> {
        check_unit("p", p)?;
        for (name, v) in [("a_count", a_count), ("w_count", w_count), ("t_count", t_count)] {
            if v > n {
                return Err(Error::InvalidParams(format!("{name} = {v} exceeds n = {n}")));
            }
        }
        Ok(ExactPmfQuery {
            n,
            a_count,
            w_count,
            t_count,
            p,
        })
    }
}

/// `ln k!` for `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let mut t = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            t.push(acc);
        }
        LnFactorials(t)
    }

    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// `ln(e^a + e^b)` without overflow.
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn ln_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let hi = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + terms.iter().map(|t| (t - hi).exp()).sum::<f64>().ln()
}

/// `k ln p`, with `0 ln 0 = 0`.
fn xlogy(k: usize, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

/// Log-pmf of `Bin(n, p)` over `0..=n`.
fn ln_binomial_pmf(lf: &LnFactorials, n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| lf.ln_choose(n, k) + xlogy(k, p) + xlogy(n - k, 1.0 - p))
        .collect()
}

/// Log-pmf of the weight of `c ⊕ U ⊕ Z` given `wt(c ⊕ U) = s`, over `0..=n`.
fn ln_weight_pmf_given_s(lf: &LnFactorials, n: usize, s: usize, p: f64) -> Vec<f64> {
    let outside = ln_binomial_pmf(lf, n - s, p);
    let inside = ln_binomial_pmf(lf, s, 1.0 - p);
    let mut out = vec![f64::NEG_INFINITY; n + 1];
    for (j, &lj) in inside.iter().enumerate() {
        if lj == f64::NEG_INFINITY {
            continue;
        }
        for (i, &li) in outside.iter().enumerate() {
            out[i + j] = ln_add(out[i + j], li + lj);
        }
    }
    out
}

/// Log-weights of the overlap `m`: `(m, ln P(m))` for the feasible range.
fn ln_overlap_law(lf: &LnFactorials, q: &ExactPmfQuery) -> Vec<(usize, f64)> {
    let (n, na, nw) = (q.n, q.a_count, q.w_count);
    let lo = (na + nw).saturating_sub(n);
    let hi = na.min(nw);
    let total = lf.ln_choose(n, na);
    (lo..=hi)
        .map(|m| (m, lf.ln_choose(nw, m) + lf.ln_choose(n - nw, na - m) - total))
        .collect()
}

/// `ln P(Bin(n - s, p) + Bin(s, 1 - p) = t)` in `O(n)`.
fn ln_point_given_s(lf: &LnFactorials, n: usize, s: usize, t: usize, p: f64) -> f64 {
    // j ones inside the support of c ⊕ U, t - j outside
    let j_lo = t.saturating_sub(n - s);
    let j_hi = s.min(t);
    if j_lo > j_hi {
        return f64::NEG_INFINITY;
    }
    ln_sum((j_lo..=j_hi).map(|j| {
        let i = t - j;
        lf.ln_choose(s, j)
            + xlogy(j, 1.0 - p)
            + xlogy(s - j, p)
            + lf.ln_choose(n - s, i)
            + xlogy(i, p)
            + xlogy(n - s - i, 1.0 - p)
    }))
}

/// `ln P(wt(c ⊕ U ⊕ Z) = t)`.
pub fn ln_exact_mixed_noise_pmf(q: &ExactPmfQuery) -> f64 {
    let lf = LnFactorials::new(q.n);
    ln_sum(ln_overlap_law(&lf, q).into_iter().map(|(m, lm)| {
        let s = q.w_count + q.a_count - 2 * m;
        lm + ln_point_given_s(&lf, q.n, s, q.t_count, q.p)
    }))
}

/// `P(wt(c ⊕ U ⊕ Z) = t)`.
pub fn exact_mixed_noise_pmf(q: &ExactPmfQuery) -> f64 {
    ln_exact_mixed_noise_pmf(q).exp()
}

/// The full law of `wt(c ⊕ U ⊕ Z)` over `0..=n` (the query's `t_count` is
/// ignored).
pub fn exact_mixed_noise_law(q: &ExactPmfQuery) -> Vec<f64> {
    let lf = LnFactorials::new(q.n);
    let mut out = vec![0.0; q.n + 1];
    for (m, lm) in ln_overlap_law(&lf, q) {
        let s = q.w_count + q.a_count - 2 * m;
        for (t, lt) in ln_weight_pmf_given_s(&lf, q.n, s, q.p).into_iter().enumerate() {
            out[t] += (lm + lt).exp();
        }
    }
    out
}

/// `ln P(wt(c ⊕ U ⊕ Z) <= t)`, in `O(n^2)`.
pub fn ln_exact_ball_prob(q: &ExactPmfQuery) -> f64 {
    let lf = LnFactorials::new(q.n);
    let n = q.n;
    let t = q.t_count;
    let mut acc = f64::NEG_INFINITY;
    for (m, lm) in ln_overlap_law(&lf, q) {
        let s = q.w_count + q.a_count - 2 * m;
        // running log-cdf of the outside count Bin(n - s, p)
        let outside = ln_binomial_pmf(&lf, n - s, q.p);
        let mut cdf = Vec::with_capacity(outside.len());
        let mut run = f64::NEG_INFINITY;
        for &l in &outside {
            run = ln_add(run, l);
            cdf.push(run);
        }
        let inside = ln_binomial_pmf(&lf, s, 1.0 - q.p);
        let term = ln_sum(
            inside
                .iter()
                .enumerate()
                .take(t.min(s) + 1)
                .map(|(j, &lj)| lj + cdf[(t - j).min(n - s)]),
        );
        acc = ln_add(acc, lm + term);
    }
    acc.min(0.0)
}

/// `P(wt(c ⊕ U ⊕ Z) <= t)`.
pub fn exact_ball_prob(q: &ExactPmfQuery) -> f64 {
    ln_exact_ball_prob(q).exp()
}

/// Largest integer weight `k` with `k <= n θ` (up to rounding noise).
pub fn threshold_count(n: usize, theta: f64) -> usize {
    ((n as f64 * theta + 1e-9).floor().max(0.0) as usize).min(n)
}

/// Exact errors of the threshold test deciding `H1` iff `wt(Z) > n θ`:
/// `ε0 = P(Bin(n, p0) > nθ)`, `ε1 = P(Bin(n, p1) <= nθ)`.
pub fn np_exact_errors(n: usize, p0: f64, p1: f64, theta: f64) -> Result<(f64, f64)> {
    check_unit("p0", p0)?;
    check_unit("p1", p1)?;
    check_unit("theta", theta)?;
    let lf = LnFactorials::new(n);
    let k = threshold_count(n, theta);
    let eps0 = if k >= n {
        0.0
    } else {
        ln_sum(ln_binomial_pmf(&lf, n, p0).into_iter().skip(k + 1)).exp()
    };
    let eps1 = ln_sum(ln_binomial_pmf(&lf, n, p1).into_iter().take(k + 1))
        .exp()
        .min(1.0);
    Ok((eps0, eps1))
}

/// Largest blocklength for [`enumerate_mixed_noise_law`].
pub const MAX_ENUMERATION_LEN: usize = 16;

/// The law of `wt(c ⊕ U ⊕ Z)` by exhaustive enumeration of every weight-`na`
/// vector `U` and every noise pattern `Z`, with `c` the first `nw` positions.
pub fn enumerate_mixed_noise_law(n: usize, a_count: usize, w_count: usize, p: f64) -> Result<Vec<f64>> {
    if n > MAX_ENUMERATION_LEN {
        return Err(Error::ResourceLimit(format!(
            "enumeration needs n <= {MAX_ENUMERATION_LEN}, got {n}"
        )));
    }
    ExactPmfQuery::new(n, a_count, w_count, 0, p)?;
    let noise: Vec<f64> = (0u32..1 << n)
        .map(|z| {
            let k = z.count_ones() as i32;
            p.powi(k) * (1.0 - p).powi(n as i32 - k)
        })
        .collect();
    let c: u32 = (1u32 << w_count) - 1;
    // compensated sums: millions of terms per bin at n = 16
    let mut law = vec![(0.0f64, 0.0f64); n + 1];
    let mut members = 0u64;
    for u in 0u32..1 << n {
        if u.count_ones() as usize != a_count {
            continue;
        }
        members += 1;
        let v = c ^ u;
        for (z, &pz) in noise.iter().enumerate() {
            let (sum, comp) = &mut law[(v ^ z as u32).count_ones() as usize];
            let t = *sum + pz;
            *comp += if sum.abs() >= pz.abs() { (*sum - t) + pz } else { (pz - t) + *sum };
            *sum = t;
        }
    }
    Ok(law
        .into_iter()
        .map(|(sum, comp)| (sum + comp) / members as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, a: usize, w: usize, t: usize, p: f64) -> ExactPmfQuery {
        ExactPmfQuery::new(n, a, w, t, p).unwrap()
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(n, a, w, p) in &[(20, 5, 7, 0.1), (50, 10, 30, 0.25), (9, 0, 9, 0.4)] {
            let total: f64 = (0..=n).map(|t| exact_mixed_noise_pmf(&q(n, a, w, t, p))).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let law = exact_mixed_noise_law(&q(n, a, w, 0, p));
            assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn no_type_noise_is_binomial_about_center() {
        // a = 0, center weight w: wt(c ⊕ Z) = Bin(n - w, p) + Bin(w, 1 - p)
        let (n, w, p) = (10, 0, 0.3_f64);
        for t in 0..=n {
            let direct = LnFactorials::new(n).ln_choose(n, t).exp()
                * p.powi(t as i32)
                * (1.0 - p).powi((n - t) as i32);
            assert!((exact_mixed_noise_pmf(&q(n, 0, w, t, p)) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_probability_edges() {
        assert!((exact_ball_prob(&q(30, 7, 11, 30, 0.2)) - 1.0).abs() < 1e-12);
        // p = 0 and w = a: only U = c reaches weight zero
        let n = 12;
        let v = exact_ball_prob(&q(n, 5, 5, 0, 0.0));
        let expect = 1.0 / LnFactorials::new(n).ln_choose(n, 5).exp();
        assert!((v / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ball_is_cumulative_pmf() {
        let (n, a, w, p) = (40, 8, 13, 0.15);
        let mut acc = 0.0;
        for t in 0..=n {
            acc += exact_mixed_noise_pmf(&q(n, a, w, t, p));
            let ball = exact_ball_prob(&q(n, a, w, t, p));
            assert!((ball - acc).abs() <= 1e-12 * acc.max(1e-300) + 1e-300, "t={t}");
        }
    }

    #[test]
    fn enumeration_agrees_small() {
        for &(n, a, w, p) in &[(6, 2, 3, 0.1), (7, 3, 0, 0.25), (5, 5, 5, 0.4), (4, 0, 0, 0.1)] {
            let exact = exact_mixed_noise_law(&q(n, a, w, 0, p));
            let brute = enumerate_mixed_noise_law(n, a, w, p).unwrap();
            for t in 0..=n {
                let scale = brute[t].abs().max(1e-300);
                assert!((exact[t] - brute[t]).abs() / scale < 1e-12, "{n} {a} {w} {t}");
            }
        }
    }

    #[test]
    fn center_complement_symmetry() {
        // complementing the center and the noise level mirrors the weight
        let (n, a, w, p) = (11, 4, 3, 0.2);
        let law = exact_mixed_noise_law(&q(n, a, w, 0, p));
        let mirrored = exact_mixed_noise_law(&q(n, a, n - w, 0, 1.0 - p));
        for t in 0..=n {
            assert!((law[t] - mirrored[t]).abs() < 1e-14);
        }
    }

    #[test]
    fn np_errors() {
        let (e0, e1) = np_exact_errors(23, 0.01, 0.25, 1.0).unwrap();
        assert_eq!(e0, 0.0);
        assert!((e1 - 1.0).abs() < 1e-12);
        let (e0, _) = np_exact_errors(23, 0.0, 0.25, 0.0).unwrap();
        assert_eq!(e0, 0.0);
        assert_eq!(threshold_count(23, 0.1), 2);
        assert_eq!(threshold_count(100, 0.07), 7);
    }
}
