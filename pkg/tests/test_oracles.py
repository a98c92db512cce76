import math

import numpy as np
import pytest

from thermal_decoherence import ConfigError, ContractedKernelArgs, DimensionlessPoint, contracted_kernel
from thermal_decoherence.oracles import (
    _planck_cosine,
    make_report,
    mc_kernel_oracle,
    oracle_kernel,
    trapezoid_s_oracle,
    zeta_partial_sums,
    zeta_sums,
)


def test_zeta_sums():
    v2, e2 = zeta_sums(2, return_error=True)
    assert abs(v2 - math.pi**2 / 6) <= e2 + 1e-15
    assert zeta_sums(4) == pytest.approx(math.pi**4 / 90, abs=1e-15)
    with pytest.raises(ConfigError):
        zeta_sums(3)


def test_zeta_partial_sums_increase():
    parts = zeta_partial_sums(2, [1, 10, 100])
    assert parts[0] == 1.0
    assert parts[0] < parts[1] < parts[2] < math.pi**2 / 6


def test_planck_cosine_branches_meet():
    a = np.array([0.1 - 1e-12, 0.1 + 1e-12])
    d = _planck_cosine(a)
    assert d[0] == pytest.approx(d[1], rel=1e-10)
    assert _planck_cosine(np.array([0.0]))[0] == pytest.approx(math.pi**2 / 6, rel=1e-15)


@pytest.mark.parametrize("y, tau, c", [(0.0, 0.0, 1.0), (3.0, 1.0, 0.5), (12.0, 4.0, 0.0)])
def test_direction_cosine_kernel_matches_engine(y, tau, c):
    ref = contracted_kernel(ContractedKernelArgs(y, tau, c))
    assert oracle_kernel(y, tau, c * c)[0] == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_mc_oracle_within_error_bars():
    rep = mc_kernel_oracle(ContractedKernelArgs(2.0, 0.5, 0.7), samples=200_000, seed=5)
    assert rep.passed
    assert rep.error_bar < 5e-3


def test_mc_oracle_thread_independent():
    args = ContractedKernelArgs(1.0, 1.0, 1.0)
    a = mc_kernel_oracle(args, samples=100_000, seed=9, threads=1, engine_value=0.0)
    b = mc_kernel_oracle(args, samples=100_000, seed=9, threads=4, engine_value=0.0)
    assert a == b
    c = mc_kernel_oracle(args, samples=100_000, seed=10, threads=1, engine_value=0.0)
    assert c.oracle_value != a.oracle_value


def test_mc_oracle_needs_samples():
    with pytest.raises(ConfigError):
        mc_kernel_oracle(ContractedKernelArgs(1.0, 1.0), samples=100)


def test_trapezoid_oracle_converges():
    pt = DimensionlessPoint(1.0, 0.05, 2.0, 3.0, 0.8)
    coarse = trapezoid_s_oracle(pt, n=64, engine_value=0.0)
    fine = trapezoid_s_oracle(pt, n=128, engine_value=0.0)
    assert fine.error_bar < coarse.error_bar / 3
    assert abs(fine.oracle_value - coarse.oracle_value) <= coarse.error_bar + fine.error_bar
    full = trapezoid_s_oracle(pt)
    assert full.passed


def test_trapezoid_oracle_limits():
    with pytest.raises(ConfigError):
        trapezoid_s_oracle(DimensionlessPoint(1.0, 0.01, 1.0, 1.0), n=16)
    rep = trapezoid_s_oracle(DimensionlessPoint(1.0, 0.01, 0.0, 1.0), engine_value=0.0)
    assert rep.oracle_value == 0.0 and rep.passed


def test_report_fields():
    rep = make_report("x", 1.0, 1.1, 0.05, "absolute 0.2", 0.2)
    d = rep.to_dict()
    assert d["passed"] and d["abs_diff"] == pytest.approx(0.1)
    assert d["rel_diff"] == pytest.approx(0.1 / 1.1)
