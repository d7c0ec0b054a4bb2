"""Smoke test for the pybdht extension module.

Build and install first, e.g. `maturin build --release` in crates/py and
`pip install` the wheel, then run `python python/smoke_test.py`.
"""

import math

import pybdht


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    assert close(pybdht.binary_entropy(0.5), 1.0)
    assert close(pybdht.binary_divergence(0.2, 0.5), 1.0 - pybdht.binary_entropy(0.2))
    assert close(pybdht.binary_entropy(pybdht.gv_distance(0.5)), 0.5)

    for p in (0.05, 0.11, 0.25, 0.4):
        assert pybdht.e_best(p, 1.0 - pybdht.binary_entropy(p)) <= 1e-6
    assert pybdht.e_bb(0.1, 0.1, 0.2, 0.1) <= pybdht.e_bt(0.1, 0.1, 0.2, 0.1) + 1e-9

    e0, e1 = pybdht.theorem2_pair(0.01, 0.25, 0.3, 0.1)
    assert (e0, e1) == pybdht.theorem1_pair(0.01, 0.25, 0.0, 0.1, 0.3)
    row = pybdht.stein_row(0.02, 0.1, 0.3)
    assert row["theorem1"] <= row["unconstrained"] + 1e-9
    assert row["theorem1"] >= row["prior_best"] - 1e-9

    curve = pybdht.tradeoff_curve("theorem2", 0.01, 0.1, 0.3, resolution=20)
    assert all(b[1] <= a[1] for a, b in zip(curve, curve[1:]))
    try:
        pybdht.tradeoff_curve("nope", 0.01, 0.1, 0.3)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown scheme accepted")

    eps0, eps1 = pybdht.np_exact_errors(23, 0.01, 0.25, 0.1)
    assert 0.0 < eps0 < 1.0 and 0.0 < eps1 < 1.0
    assert close(pybdht.exact_ball_prob(10, 3, 2, 10, 0.2), 1.0)

    code = pybdht.LinearCode.from_text("3 1\n111\n")
    assert (code.n, code.k) == (3, 1)
    assert code.quantize("110") == "111"
    dmin, cover, spectrum = code.diagnostics()
    assert (dmin, cover) == (3, 1) and spectrum == {0: 1, 3: 1}
    better = pybdht.LinearCode.random(24, 7, 0).improve_covering(0)
    assert better.diagnostics()[1] / 24 <= pybdht.gv_distance(0.5) + 0.15

    est = pybdht.simulate(0.01, 0.25, 0.3, 0.1, n=15, trials=2000, seed=1)
    assert est == pybdht.simulate(0.01, 0.25, 0.3, 0.1, n=15, trials=2000, seed=1)
    assert est["eps0_lo"] <= est["eps0"] <= est["eps0_hi"]
    assert not math.isnan(est["eps1"])

    print("pybdht smoke test passed")


if __name__ == "__main__":
    main()
