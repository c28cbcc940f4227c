import math

import numpy as np
import pytest

import nsclab


def test_normalized_defaults():
    d = nsclab.normalize(nsclab.PhysicalParams())
    assert d["c"] == pytest.approx(1.0)
    assert d["b"] == pytest.approx(math.sqrt(2 / 3))
    assert d["kappa_prime"] == pytest.approx(2 / 3)


def test_invalid_params_raise():
    p = nsclab.PhysicalParams()
    p.kappa = -1.0
    with pytest.raises(nsclab.InvalidParams):
        nsclab.normalize(p)


def test_eigenvalues_are_symbol_eigenvalues():
    r = 0.7
    lam, ambiguous = nsclab.eigenvalues(r)
    assert not ambiguous
    # solutions evolve by exp(-t B)
    ev = np.linalg.eigvals(-nsclab.symbol([r]))
    for l in lam:
        assert np.min(np.abs(ev - l)) < 1e-9


def test_green_methods_agree():
    G1 = nsclab.green([0.3, 0.4, 0.0], 2.0, "explicit")
    G2 = nsclab.green([0.3, 0.4, 0.0], 2.0, "expm")
    assert G1.shape == (8, 8)
    assert np.max(np.abs(G1 - G2)) < 1e-9


def test_fit_exact_power_law():
    t = np.logspace(2, 5, 40)
    f = nsclab.fit_decay(t, (1 + t) ** -0.75, 1e2, 1e5)
    assert f["slope"] == pytest.approx(-0.75, abs=1e-12)


def test_linear_decay_and_fit():
    out = nsclab.linear_decay(overrides=["time.times=log:1e2:1e4:12", "requests.components=n", "requests.k=0"])
    assert list(out["columns"]) == ["n_k0"]
    f = nsclab.fit_decay(out["times"], out["columns"]["n_k0"])
    assert f["slope"] == pytest.approx(-0.75, abs=0.02)


def test_nonlinear_short_run():
    out = nsclab.nonlinear(overrides=["grid.N=8", "time.tmax=0.2", "time.dt=0.05"])
    assert out["completed"]
    assert out["steps"] == 4
    assert np.all(out["min_density"] > 0)


def test_config_errors():
    with pytest.raises(nsclab.ConfigKeyError):
        nsclab.config(overrides=["physical.tua=1"])
    assert nsclab.config("[physical]\ntau = 0.5\n")["physical"]["tau"] == 0.5


def test_accept_subset():
    rep = nsclab.accept("1,10")
    assert [c["id"] for c in rep["criteria"]] == [1, 10]
    assert all(c["pass"] for c in rep["criteria"])
