//! Python bindings: exponent formulas, scheme regions, exact oracles, codes
//! and the simulator.

use std::collections::BTreeMap;

use bdht::regions::{self, HypothesisPair, Scheme, SchemeParams, SteinSearch};
use bdht::{binmath, exponents, gf2, oracle, simkit};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: bdht::Error) -> PyErr {
    match e {
        bdht::Error::ResourceLimit(_) | bdht::Error::SamplingFailure(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn pair(p0: f64, p1: f64) -> PyResult<HypothesisPair> {
    HypothesisPair::new(p0, p1).map_err(to_py)
}

#[pyfunction]
fn binary_entropy(p: f64) -> f64 {
    binmath::binary_entropy(p)
}

#[pyfunction]
fn binary_divergence(p: f64, q: f64) -> f64 {
    binmath::binary_divergence(p, q)
}

#[pyfunction]
fn binary_convolution(p: f64, q: f64) -> f64 {
    binmath::binary_convolution(p, q)
}

#[pyfunction]
fn gv_distance(rate: f64) -> f64 {
    binmath::gv_distance(rate)
}

/// Exponent of `P(wt(c ⊕ U ⊕ Z) <= nθ)` for a center of weight `w`.
#[pyfunction]
fn e_bt(p: f64, a: f64, w: f64, theta: f64) -> f64 {
    exponents::e_bt(p, a, w, theta)
}

/// As `e_bt`, with the quantization noise of type at most `a`.
#[pyfunction]
fn e_bb(p: f64, a: f64, w: f64, theta: f64) -> f64 {
    exponents::e_bb(p, a, w, theta)
}

/// Best known BSC(p) error exponent at rate `rate`.
#[pyfunction]
fn e_best(p: f64, rate: f64) -> f64 {
    exponents::e_best(p, rate)
}

/// `(E0, E1)` of the quantize-and-bin scheme.
#[pyfunction]
#[pyo3(signature = (p0, p1, a, theta, rate, time_share = 1.0))]
fn theorem1_pair(p0: f64, p1: f64, a: f64, theta: f64, rate: f64, time_share: f64) -> PyResult<(f64, f64)> {
    let mut params = SchemeParams::new(a, theta, rate);
    params.time_share = time_share;
    let e = regions::theorem1_pair(&pair(p0, p1)?, &params).map_err(to_py)?;
    Ok((e.e0, e.e1))
}

/// `(E0, E1)` under a symmetric rate constraint.
#[pyfunction]
fn theorem2_pair(p0: f64, p1: f64, rate: f64, theta: f64) -> PyResult<(f64, f64)> {
    let e = regions::theorem2_pair(&pair(p0, p1)?, rate, theta).map_err(to_py)?;
    Ok((e.e0, e.e1))
}

#[pyfunction]
fn theorem1_stein(p0: f64, p1: f64, rate: f64) -> PyResult<f64> {
    Ok(regions::theorem1_stein(&pair(p0, p1)?, rate))
}

/// All Stein exponents at one point, time-shared, keyed by name.
#[pyfunction]
fn stein_row(p0: f64, p1: f64, rate: f64) -> PyResult<BTreeMap<&'static str, f64>> {
    let r = regions::stein_row(&pair(p0, p1)?, rate, SteinSearch::default());
    Ok(BTreeMap::from([
        ("unconstrained", r.unconstrained),
        ("baseline", r.baseline),
        ("sigma_ac", r.sigma_ac),
        ("sigma_han", r.sigma_han),
        ("sigma_sha", r.sigma_sha),
        ("prior_best", r.prior_best),
        ("theorem1", r.theorem1),
        ("theorem1_plain", r.theorem1_plain),
        ("theorem1_no_quantization", r.theorem1_no_quantization),
    ]))
}

/// Pareto frontier `[(E0, E1), ...]` of one scheme, by increasing `E0`.
#[pyfunction]
#[pyo3(signature = (scheme, p0, p1, rate, resolution = 200))]
fn tradeoff_curve(scheme: &str, p0: f64, p1: f64, rate: f64, resolution: usize) -> PyResult<Vec<(f64, f64)>> {
    let scheme: Scheme = scheme.parse().map_err(to_py)?;
    let curve = regions::tradeoff_curve(scheme, &pair(p0, p1)?, rate, resolution).map_err(to_py)?;
    Ok(curve.points.iter().map(|p| (p.pair.e0, p.pair.e1)).collect())
}

/// Exact `P(wt(c ⊕ U ⊕ Z) <= t)` for counts `(a, w, t)` at blocklength `n`.
#[pyfunction]
fn exact_ball_prob(n: usize, a_count: usize, w_count: usize, t_count: usize, p: f64) -> PyResult<f64> {
    let q = oracle::ExactPmfQuery::new(n, a_count, w_count, t_count, p).map_err(to_py)?;
    Ok(oracle::exact_ball_prob(&q))
}

#[pyfunction]
fn exact_mixed_noise_pmf(n: usize, a_count: usize, w_count: usize, t_count: usize, p: f64) -> PyResult<f64> {
    let q = oracle::ExactPmfQuery::new(n, a_count, w_count, t_count, p).map_err(to_py)?;
    Ok(oracle::exact_mixed_noise_pmf(&q))
}

/// Exact `(ε0, ε1)` of the centralized threshold test.
#[pyfunction]
fn np_exact_errors(n: usize, p0: f64, p1: f64, theta: f64) -> PyResult<(f64, f64)> {
    oracle::np_exact_errors(n, p0, p1, theta).map_err(to_py)
}

/// A binary linear code.
#[pyclass(name = "LinearCode", module = "pybdht")]
struct PyLinearCode {
    inner: gf2::LinearCode,
}

fn bits(s: &str) -> PyResult<gf2::BitVec> {
    s.parse().map_err(to_py)
}

#[pymethods]
impl PyLinearCode {
    /// Uniformly random `[n, k]` code.
    #[staticmethod]
    fn random(n: usize, k: usize, seed: u64) -> PyResult<Self> {
        Ok(PyLinearCode {
            inner: gf2::sample_random_linear_code(n, k, seed).map_err(to_py)?,
        })
    }

    /// Parse `"n k"` followed by `k` generator rows of `0`/`1`.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyLinearCode {
            inner: gf2::LinearCode::from_text(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Append generator rows that shrink the covering radius.
    fn improve_covering(&self, seed: u64) -> PyResult<Self> {
        Ok(PyLinearCode {
            inner: gf2::improve_covering(&self.inner, seed).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    fn syndrome(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.syndrome(&bits(x)?).map_err(to_py)?.to_string())
    }

    /// Nearest codeword to `x`.
    fn quantize(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.quantize(&bits(x)?).map_err(to_py)?.to_string())
    }

    fn contains(&self, x: &str) -> PyResult<bool> {
        self.inner.contains(&bits(x)?).map_err(to_py)
    }

    /// `(min_distance, covering_radius, spectrum)`; the minimum distance is
    /// `None` for the zero code.
    fn diagnostics(&self) -> PyResult<(Option<usize>, usize, BTreeMap<usize, u64>)> {
        let d = self.inner.diagnostics().map_err(to_py)?;
        Ok((d.min_distance, d.covering_radius, d.spectrum))
    }

    fn __repr__(&self) -> String {
        format!("LinearCode(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

/// Simulate the one-sided (or, with `symmetric=True`, the syndrome-sum)
/// test. Returns error estimates with 95% intervals.
#[pyfunction]
#[pyo3(signature = (p0, p1, rate, theta, n, trials, seed = 0, a = 0.0, symmetric = false, code_seed = 1))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    p0: f64,
    p1: f64,
    rate: f64,
    theta: f64,
    n: usize,
    trials: usize,
    seed: u64,
    a: f64,
    symmetric: bool,
    code_seed: u64,
) -> PyResult<BTreeMap<&'static str, f64>> {
    let params = SchemeParams::new(a, theta, rate);
    let cfg = simkit::SimConfig {
        n,
        trials,
        seed,
        h: pair(p0, p1)?,
        params,
        scheme: if symmetric {
            simkit::SimScheme::KornerMarton
        } else {
            simkit::SimScheme::OneSided
        },
    };
    let nested = simkit::nested_for_params(n, &params, code_seed).map_err(to_py)?;
    let records = if symmetric {
        simkit::run_korner_marton(&cfg, &nested.coarse)
    } else {
        simkit::run_one_sided(&cfg, &nested)
    }
    .map_err(to_py)?;
    let e = simkit::estimate_errors(&records).map_err(to_py)?;
    Ok(BTreeMap::from([
        ("eps0", e.eps0.estimate),
        ("eps0_lo", e.eps0.lower),
        ("eps0_hi", e.eps0.upper),
        ("eps1", e.eps1.estimate),
        ("eps1_lo", e.eps1.lower),
        ("eps1_hi", e.eps1.upper),
        ("bin_error_rate0", e.eps0.bin_error_rate()),
        ("bin_error_rate1", e.eps1.bin_error_rate()),
    ]))
}

#[pymodule]
fn pybdht(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(binary_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(binary_convolution, m)?)?;
    m.add_function(wrap_pyfunction!(gv_distance, m)?)?;
    m.add_function(wrap_pyfunction!(e_bt, m)?)?;
    m.add_function(wrap_pyfunction!(e_bb, m)?)?;
    m.add_function(wrap_pyfunction!(e_best, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_pair, m)?)?;
    m.add_function(wrap_pyfunction!(theorem2_pair, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_stein, m)?)?;
    m.add_function(wrap_pyfunction!(stein_row, m)?)?;
    m.add_function(wrap_pyfunction!(tradeoff_curve, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ball_prob, m)?)?;
    m.add_function(wrap_pyfunction!(exact_mixed_noise_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(np_exact_errors, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_class::<PyLinearCode>()?;
    Ok(())
}
