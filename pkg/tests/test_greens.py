import math

import numpy as np
import pytest
from scipy import special

from thermal_decoherence import ConfigError, ContractedKernelArgs, coincidence_limit, contracted_kernel
from thermal_decoherence.greens import KERNEL_AT_ORIGIN, kernel_on_rule, radial_rule, transverse_weights

# (2/pi) int dk k/(e^k - 1) cos(k tau) [T_delta(k y) + c^2 T_r(k y)], 30-digit mpmath quadrature
MPMATH_KERNEL = [
    ((3.0, 1.0, 1.0), 0.2399051645504041),
    ((3.0, 1.0, 0.5), 0.19017117444313895),
    ((0.5, 2.0, 0.0), 0.057189451096225178),
    ((10.0, 0.0, 1.0), 0.093800468942990853),
]


@pytest.mark.parametrize("args, ref", MPMATH_KERNEL)
def test_kernel_against_mpmath(args, ref):
    assert contracted_kernel(ContractedKernelArgs(*args)) == pytest.approx(ref, rel=1e-12)


def test_kernel_at_origin():
    assert contracted_kernel(ContractedKernelArgs(0.0, 0.0)) == pytest.approx(KERNEL_AT_ORIGIN, rel=1e-13)
    assert KERNEL_AT_ORIGIN == pytest.approx(2 * math.pi / 9)


def test_coincidence_limit_closed_form():
    # int k cos(k tau)/(e^k - 1) dk = 1/(2 tau^2) - pi^2/(2 sinh^2(pi tau))
    for tau in (0.3, 1.0, 4.0, 50.0):
        closed = 0.5 / tau**2 - 0.5 * math.pi**2 / math.sinh(math.pi * tau) ** 2
        assert coincidence_limit(tau) == pytest.approx(4 / (3 * math.pi) * closed, rel=1e-12)


def test_small_separation_approaches_coincidence():
    for tau in (0.5, 2.0):
        near = contracted_kernel(ContractedKernelArgs(1e-5, tau, 0.3))
        assert near == pytest.approx(coincidence_limit(tau), rel=1e-8)


def test_kernel_even_in_time():
    a = contracted_kernel(ContractedKernelArgs(2.0, 1.5, 0.4))
    b = contracted_kernel(ContractedKernelArgs(2.0, -1.5, 0.4))
    assert a == b


def test_return_error():
    value, err = contracted_kernel(ContractedKernelArgs(2.0, 1.0), return_error=True)
    assert 0 < err < 1e-9
    assert value == contracted_kernel(ContractedKernelArgs(2.0, 1.0))


def test_transverse_weights_against_bessel():
    u = np.array([1e-4, 0.3, 0.99, 1.0, 1.01, 5.0, 80.0])
    j0 = special.spherical_jn(0, u)
    j1 = special.spherical_jn(1, u)
    td, tr = transverse_weights(u)
    assert np.allclose(td, j0 - j1 / u, rtol=1e-10, atol=1e-14)
    assert np.allclose(tr, -j0 + 3 * j1 / u, rtol=1e-10, atol=1e-14)
    assert transverse_weights(0.0) == pytest.approx((2.0 / 3.0, 0.0), abs=1e-15)


def test_transverse_weights_continuous_at_cut():
    lo = transverse_weights(1.0 - 1e-12)
    hi = transverse_weights(1.0 + 1e-12)
    assert lo == pytest.approx(hi, abs=1e-11)


def test_transverse_weights_reject_negative():
    with pytest.raises(ConfigError):
        transverse_weights(-0.1)


def test_kernel_on_rule_matches_adaptive():
    k, w = radial_rule(6.0, order=32)
    vals = kernel_on_rule(np.array([1.0, 2.0]), np.array([3.0, 4.0]), np.array([1.0, 0.25]), k, w)
    ref = [contracted_kernel(ContractedKernelArgs(3.0, 1.0, 1.0)),
           contracted_kernel(ContractedKernelArgs(4.0, 2.0, 0.5))]
    assert np.allclose(vals, ref, rtol=1e-10)


def test_invalid_args():
    with pytest.raises(ConfigError):
        contracted_kernel(ContractedKernelArgs(-1.0, 1.0))
    with pytest.raises(ConfigError):
        contracted_kernel(ContractedKernelArgs(1.0, 1.0, 2.0))
