"""The numba and numpy backends evaluate the same formulas."""

import numpy as np
import pytest

from thermal_decoherence._backend import BACKEND_ENV, HAVE_NUMBA, max_threads, selected_backend
from thermal_decoherence.bose import log_sinh_ratio
from thermal_decoherence.greens import radial_rule
from thermal_decoherence.kernels import contracted_sum, planck_pair, transverse_weights_array

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")

RNG = np.random.default_rng(7)


def test_weights_parity():
    u = np.concatenate([RNG.uniform(0, 2, 500), RNG.uniform(0, 200, 500)])
    nb = transverse_weights_array(u, backend="numba")
    np_ = transverse_weights_array(u, backend="numpy")
    for a, b in zip(nb, np_):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-16)


def test_contracted_sum_parity():
    k, w = radial_rule(20.0)
    tau = RNG.uniform(0, 10, 300)
    r = RNG.uniform(0, 10, 300)
    wd = RNG.uniform(-1, 1, 300)
    wr = RNG.uniform(-1, 1, 300)
    a = contracted_sum(tau, r, wd, wr, k, w, backend="numba")
    b = contracted_sum(tau, r, wd, wr, k, w, backend="numpy")
    assert np.allclose(a, b, rtol=1e-11, atol=1e-15)


def test_planck_pair_parity_and_identity():
    a = RNG.uniform(0, 30, 400)
    b = RNG.uniform(0, 30, 400)
    a[:20] = RNG.uniform(0, 1e-3, 20)
    nb = planck_pair(a, b, backend="numba")
    np_ = planck_pair(a, b, backend="numpy")
    assert np.allclose(nb, np_, rtol=1e-11, atol=1e-16)
    ref = 0.5 * (log_sinh_ratio(a) + log_sinh_ratio(b)) - 0.25 * (
        log_sinh_ratio(a + b) + log_sinh_ratio(np.abs(a - b))
    )
    big = np.minimum(a, b) > 0.5
    assert np.allclose(nb[big], ref[big], rtol=1e-10)
    assert np.all(nb >= 0)


def test_planck_pair_vanishes_on_axes():
    assert planck_pair(0.0, 3.0) == 0.0
    assert planck_pair(2.0, 0.0) == 0.0


def test_backend_selection(monkeypatch):
    monkeypatch.setenv(BACKEND_ENV, "numpy")
    assert selected_backend() == "numpy"
    monkeypatch.setenv(BACKEND_ENV, "fortran")
    with pytest.raises(ValueError):
        selected_backend()


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("THERMAL_DECOHERENCE_THREADS", "3")
    assert max_threads() == 3
    monkeypatch.setenv("THERMAL_DECOHERENCE_THREADS", "0")
    with pytest.raises(ValueError):
        max_threads()
