import math

import numpy as np
import pytest

import ctrwlim


def test_ml_half_closed_form():
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    for x in (0.1, 0.5, 1.0, 2.0):
        want = math.exp(x * x) * math.erfc(x)
        assert ctrwlim.ml_eval(0.5, -x) == pytest.approx(want, rel=1e-10)
    assert ctrwlim.ml_eval(1.0, -1.5) == pytest.approx(math.exp(-1.5), rel=1e-13)


def test_frac_poisson_beta_one_is_poisson():
    t = 2.0
    for k in range(6):
        want = math.exp(-t) * t**k / math.factorial(k)
        assert ctrwlim.frac_poisson_pmf(1.0, t, k) == pytest.approx(want, rel=1e-10)
    assert ctrwlim.frac_poisson_mean(1.0, t) == pytest.approx(t, rel=1e-9)


def test_samplers_are_seeded_arrays():
    a = ctrwlim.sample_symmetric_stable(1.5, 1000, seed=3)
    b = ctrwlim.sample_symmetric_stable(1.5, 1000, seed=3)
    assert isinstance(a, np.ndarray) and a.shape == (1000,)
    assert np.array_equal(a, b)
    w = ctrwlim.sample_ml_waiting_time(0.7, 500, seed=1)
    assert (w > 0).all()
    g = ctrwlim.sample_symmetric_stable(2.0, 20000, seed=5)
    # alpha = 2 with unit scale is N(0, 2)
    assert np.var(g) == pytest.approx(2.0, rel=0.05)


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        ctrwlim.sample_symmetric_stable(2.5, 10)
    with pytest.raises(ValueError):
        ctrwlim.sample_ml_waiting_time(0.0, 10)


def test_step_path_and_distances():
    x = ctrwlim.StepPath.from_jumps([0.5], [1.0], 1.0)
    y = ctrwlim.StepPath.from_jumps([0.6], [1.0], 1.0)
    assert x(0.4) == 0.0 and x(0.5) == 1.0
    assert ctrwlim.uniform_distance(x, y) == pytest.approx(1.0)
    assert ctrwlim.j1_distance(x, y) == pytest.approx(0.1, abs=1e-8)
    assert ctrwlim.m1_distance(x, y) == pytest.approx(0.1, abs=1e-8)
    assert ctrwlim.m1_modulus(x, 0.1) == 0.0


def test_integral_constant_matches_ctrw():
    p = ctrwlim.simulate_ctrw(1.7, 0.8, 64, 1.0, seed=2)
    q = ctrwlim.integral_process("const:c=1", 1.7, 0.8, 64, 1.0, seed=2)
    assert np.allclose(p.values, q.values)


def test_density_grid_gaussian():
    d = ctrwlim.limit_density(2.0, 1.0, 1.0, 10.0, 801)
    x = d["x"]
    want = np.exp(-x * x / 4) / math.sqrt(4 * math.pi)
    assert np.max(np.abs(d["density"] - want)) < 1e-6
    assert d["mass"] == pytest.approx(1.0, abs=1e-4)


def test_small_report():
    r = ctrwlim.convergence_report(n=(16, 64), samples=200, modulus_paths=10, seed=1)
    assert r["limit"]["method"] == "gaussian"
    assert [row["n"] for row in r["per_n"]] == [16, 64]
    assert all(0.0 <= k <= 1.0 for row in r["per_n"] for k in row["ks"].values())
    assert set(r["per_n"][0]["ks"]) == {"0.25", "0.5", "1"}
