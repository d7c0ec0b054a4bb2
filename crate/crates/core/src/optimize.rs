//! One-dimensional minimization: a bracketing grid followed by Brent
//! refinement.
//!
//! Objectives may take the value `+inf` outside their effective domain. The
//! grid locates the best finite sample; Brent's method then refines inside the
//! two neighbouring cells. For convex objectives this finds the global minimum;
//! for non-convex ones the result is as good as the grid resolution allows.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Grid resolution and refinement tolerance for a scalar search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Search {
    /// Number of grid intervals (the grid has `cells + 1` points).
    pub cells: usize,
    /// Absolute tolerance on the argument.
    pub tol: f64,
}

impl Search {
    pub const fn new(cells: usize, tol: f64) -> Self {
        Search { cells, tol }
    }

    /// Grid with (at most) the given step over an interval of length `width`.
    pub fn with_step(width: f64, step: f64, tol: f64) -> Self {
        let cells = (width / step).ceil().max(1.0) as usize;
        Search { cells, tol }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd {
        Minimum { x: c, value: fc }
    } else {
        Minimum { x: d, value: fd }
    };
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.value {
                best = Minimum { x: c, value: fc };
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.value {
                best = Minimum { x: d, value: fd };
            }
        }
    }
    best
}

/// Brent's minimizer on `[lo, hi]`: golden-section steps mixed with parabolic
/// interpolation. Parabolic steps are skipped while any of the three retained
/// values is infinite.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    const CGOLD: f64 = 1.0 - INV_PHI;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + CGOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        let tol1 = tol * 0.5 + 1e-15 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum { x, value: fx }
}

/// Minimize `f` over `[lo, hi]` by grid bracketing plus Brent refinement.
///
/// Both endpoints are always evaluated, so boundary minima are exact.
pub fn minimize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, search: Search) -> Minimum {
    if hi < lo {
        return Minimum {
            x: lo,
            value: f64::INFINITY,
        };
    }
    if hi == lo {
        return Minimum { x: lo, value: f(lo) };
    }
    let cells = search.cells.max(2);
    let step = (hi - lo) / cells as f64;
    let mut best_i = 0;
    let mut best = Minimum {
        x: lo,
        value: f(lo),
    };
    for i in 1..=cells {
        let x = if i == cells { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v < best.value || best.value.is_nan() {
            best = Minimum { x, value: v };
            best_i = i;
        }
    }
    if !best.value.is_finite() {
        return best;
    }
    let a = if best_i == 0 { lo } else { lo + step * (best_i - 1) as f64 };
    let b = if best_i >= cells - 1 { hi } else { lo + step * (best_i + 1) as f64 };
    let refined = brent(&mut f, a, b, search.tol);
    if refined.value < best.value {
        refined
    } else {
        best
    }
}

/// Maximize `f` over `[lo, hi]`; the mirror image of [`minimize`].
pub fn maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, search: Search) -> Minimum {
    let m = minimize(|x| -f(x), lo, hi, search);
    Minimum {
        x: m.x,
        value: -m.value,
    }
}
