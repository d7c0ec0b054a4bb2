//! Binary entropy, divergence and related scalar primitives.
//!
//! All logarithms are base 2. Probabilities are passed as plain `f64` to the
//! numeric kernels; [`Prob`] and [`Rate`] validate values at API boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Prob(f64);

impl Prob {
    pub fn new(value: f64) -> Result<Self> {
        check_unit("probability", value).map(Prob)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Prob::new(value)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

/// A rate in bits per sample, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rate(f64);

impl Rate {
    pub fn new(value: f64) -> Result<Self> {
        check_unit("rate", value).map(Rate)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Rate {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Rate::new(value)
    }
}

impl From<Rate> for f64 {
    fn from(r: Rate) -> f64 {
        r.0
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    check_range(name, value, 0.0, 1.0)
}

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// `x * log2(x / y)` with the conventions `0 log(0/y) = 0` and
/// `x log(x/0) = +inf` for `x > 0`.
#[inline]
fn rel_term(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if y <= 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).log2()
    }
}

/// Binary entropy `h_b(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Binary KL divergence `d_b(p || q)` in bits. Returns `+inf` when `p` is
/// not absolutely continuous with respect to `q`.
pub fn binary_divergence(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    let d = rel_term(p, q) + rel_term(1.0 - p, 1.0 - q);
    // rounding can produce tiny negatives when p and q are very close
    d.max(0.0)
}

/// Binary convolution `p * q = (1-p) q + p (1-q)`.
#[inline]
pub fn binary_convolution(p: f64, q: f64) -> f64 {
    (1.0 - p) * q + p * (1.0 - q)
}

const INV_ENTROPY_MAX_ITERS: usize = 200;
const INV_ENTROPY_TOL: f64 = 1e-12;

/// The unique `p` in `[0, 1/2]` with `h_b(p) = y`, found by bisection.
///
/// `y` is clamped to `[0, 1]`.
pub fn inverse_binary_entropy(y: f64) -> f64 {
    let y = y.clamp(0.0, 1.0);
    if y == 0.0 {
        return 0.0;
    }
    if y == 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..INV_ENTROPY_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        // h_b is steep near 0, so p needs a tighter bracket than h_b(p)
        if hi - lo < INV_ENTROPY_TOL * 1e-3 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Gilbert–Varshamov relative distance `h_b^{-1}(1 - R)`.
pub fn gv_distance(rate: f64) -> f64 {
    inverse_binary_entropy(1.0 - rate)
}

/// Rate of a code whose Gilbert–Varshamov distance is `delta`, i.e. the
/// inverse of [`gv_distance`] on `[0, 1/2]`.
pub fn gv_rate(delta: f64) -> f64 {
    1.0 - binary_entropy(delta.min(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |i| i as f64 / n as f64)
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        // -0.11 log2 0.11 - 0.89 log2 0.89
        let direct = 0.11 * (1.0f64 / 0.11).log2() + 0.89 * (1.0f64 / 0.89).log2();
        assert!((binary_entropy(0.11) - direct).abs() < 1e-15);
        assert!((binary_entropy(0.11) - 0.4999).abs() < 1e-4);
    }

    #[test]
    fn divergence_examples() {
        for p in grid(20) {
            assert_eq!(binary_divergence(p, p), 0.0);
        }
        let d = binary_divergence(0.11, 0.5);
        assert!((d - (1.0 - binary_entropy(0.11))).abs() < 1e-12);
        assert!((d - 0.5001).abs() < 1e-4);
        assert_eq!(binary_divergence(0.25, 0.0), f64::INFINITY);
        assert_eq!(binary_divergence(0.25, 1.0), f64::INFINITY);
        assert_eq!(binary_divergence(0.0, 0.0), 0.0);
        assert_eq!(binary_divergence(0.0, 0.5), 1.0);
    }

    #[test]
    fn divergence_nonnegative_and_zero_only_on_diagonal() {
        for p in grid(40) {
            for q in grid(40) {
                let d = binary_divergence(p, q);
                assert!(d >= 0.0);
                if p != q {
                    assert!(d > 0.0, "d({p}||{q}) = {d}");
                }
            }
        }
    }

    #[test]
    fn divergence_against_half_is_one_minus_entropy() {
        for w in grid(1000) {
            let lhs = binary_divergence(w, 0.5);
            assert!((lhs - (1.0 - binary_entropy(w))).abs() <= 1e-12, "w={w}");
        }
    }

    #[test]
    fn convolution_examples() {
        for q in grid(10) {
            assert!((binary_convolution(0.5, q) - 0.5).abs() < 1e-15);
            assert!((binary_convolution(0.0, q) - q).abs() < 1e-15);
            assert!((binary_convolution(q, 0.5) - 0.5).abs() < 1e-15);
        }
        assert!((binary_convolution(0.1, 0.1) - 0.18).abs() < 1e-15);
    }

    #[test]
    fn inverse_entropy_examples() {
        assert_eq!(inverse_binary_entropy(1.0), 0.5);
        assert_eq!(inverse_binary_entropy(0.0), 0.0);
        let p = inverse_binary_entropy(binary_entropy(0.11));
        assert!((p - 0.11).abs() < 1e-12);
        assert!((inverse_binary_entropy(0.4999) - 0.11).abs() < 1e-4);
    }

    #[test]
    fn inverse_entropy_round_trip() {
        for y in grid(2000) {
            let p = inverse_binary_entropy(y);
            assert!((0.0..=0.5).contains(&p));
            assert!((binary_entropy(p) - y).abs() <= 1e-10, "y={y}");
        }
        for y in [1e-3, 1e-6, 1e-9, 1e-12] {
            assert!((binary_entropy(inverse_binary_entropy(y)) - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn gv_distance_examples_and_monotonicity() {
        assert_eq!(gv_distance(1.0), 0.0);
        assert_eq!(gv_distance(0.0), 0.5);
        assert_eq!(gv_distance(0.3), inverse_binary_entropy(0.7));
        let mut prev = gv_distance(0.0);
        for i in 1..1000 {
            let d = gv_distance(i as f64 / 1000.0);
            assert!(d < prev, "not strictly decreasing at R={}", i as f64 / 1000.0);
            prev = d;
        }
        assert!((gv_rate(gv_distance(0.3)) - 0.3).abs() < 1e-10);
    }

    #[test]
    fn newtypes_validate() {
        assert!(Prob::new(0.3).is_ok());
        assert!(Prob::new(-0.1).is_err());
        assert!(Prob::new(f64::NAN).is_err());
        assert!(Rate::new(1.2).is_err());
        assert_eq!(Prob::try_from(0.25).unwrap().get(), 0.25);
    }
}
