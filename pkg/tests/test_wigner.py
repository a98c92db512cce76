import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from thermal_decoherence import (
    ConfigError,
    DensitySlice,
    NyquistError,
    double_commutator_apply,
    gaussian_slice,
    gaussian_wigner,
    momentum_damping_evolve,
    wigner_transform,
)
from thermal_decoherence.wigner import CenteredDensity, momentum_pair_density, nyquist_limit

U = np.linspace(-20, 20, 1025)


@pytest.mark.parametrize("a, p", [(1.0, 0.0), (0.5, 0.3), (4.0, -2.0)])
def test_gaussian_closed_form(a, p):
    w = wigner_transform(gaussian_slice(U, a, p))
    assert np.max(np.abs(w.values - gaussian_wigner(w.k_grid, a, p))) < 1e-8
    assert w.imag_residue < 1e-10


def test_normalisation():
    w = wigner_transform(gaussian_slice(U, 1.0, 0.3), np.linspace(-20, 20, 4001))
    assert trapezoid(w.values, w.k_grid) == pytest.approx(1.0, abs=1e-10)


def test_nyquist_guard():
    sl = gaussian_slice(U, 1.0, 0.0)
    kmax = nyquist_limit(sl)
    wigner_transform(sl, [-kmax, kmax])
    with pytest.raises(NyquistError):
        wigner_transform(sl, [0.0, 1.01 * kmax])


def test_non_hermitian_rejected():
    rho = np.exp(-U**2) * (1 + 0.1j * np.ones_like(U))
    with pytest.raises(ConfigError):
        wigner_transform(DensitySlice(U, rho))


def test_grid_checks():
    with pytest.raises(ConfigError):
        DensitySlice(np.array([0.0, 1.0, 3.0]), np.ones(3)).validate()
    with pytest.raises(ConfigError):
        DensitySlice(np.array([0.0, 1.0, 2.0]), np.ones(3)).validate()


def test_damping_semigroup_and_identity():
    w0 = wigner_transform(gaussian_slice(U, 1.0, 0.3))
    assert np.array_equal(momentum_damping_evolve(w0, 0.0, 5.0).values, w0.values)
    two = momentum_damping_evolve(momentum_damping_evolve(w0, 0.2, 0.4), 0.2, 0.6)
    one = momentum_damping_evolve(w0, 0.2, 1.0)
    assert np.max(np.abs(two.values - one.values)) < 1e-15
    with pytest.raises(ConfigError):
        momentum_damping_evolve(w0, -0.1, 1.0)


def test_damping_of_gaussian_stays_gaussian():
    # exp(-b k^2 t) times a Gaussian of variance a is a narrower Gaussian of variance a/(1 + 2 a b t)
    a, b, t = 1.0, 0.1, 2.0
    w0 = wigner_transform(gaussian_slice(U, a, 0.0))
    wt = momentum_damping_evolve(w0, b, t)
    a_t = a / (1 + 2 * a * b * t)
    scale = math.sqrt(a_t / a)
    assert np.allclose(wt.values, scale * gaussian_wigner(w0.k_grid, a_t, 0.0), atol=1e-12)


def test_generator_annihilates_translation_invariant_slice():
    q = np.linspace(-3, 3, 31)
    u = U[::32]
    vals = np.tile(gaussian_slice(u, 1.0, 0.5).values, (q.size, 1))
    out = double_commutator_apply(CenteredDensity(q, u, vals), 0.3)
    assert np.max(np.abs(out.values)) < 1e-11


def test_generator_eigenvalue_on_momentum_pair():
    # -b[P,[P,|k1><k2|]] = -b (k1 - k2)^2 |k1><k2|, up to O(h^2) stencil error
    q = np.linspace(-1, 1, 401)
    u = np.array([-1.0, 0.0, 1.0])
    k1, k2, b = 1.3, -0.4, 0.2
    rho = momentum_pair_density(q, u, k1, k2)
    out = double_commutator_apply(rho, b)
    expected = -b * (k1 - k2) ** 2 * rho.values
    interior = slice(1, -1)
    assert np.max(np.abs(out.values[interior] - expected[interior])) < 1e-4
    assert np.max(np.abs(out.values - expected)) < 1e-2


def test_generator_needs_four_points():
    with pytest.raises(ConfigError):
        double_commutator_apply(CenteredDensity(np.arange(3.0), np.zeros(1), np.ones((3, 1))), 0.1)
