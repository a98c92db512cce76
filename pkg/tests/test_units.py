import math

import numpy as np
import pytest

from thermal_decoherence import (
    ConfigError,
    DimensionlessPoint,
    PhysicalConfig,
    from_dimensionless,
    thermal_wavelength,
    to_dimensionless,
)
from thermal_decoherence.constants import (
    FINE_STRUCTURE,
    PHYSICAL_CONSTANTS,
    RESOLVED_COEFFICIENTS,
    constants_hash,
    coupling_from_charge,
)


def _cfg(**kw):
    base = dict(temperature=300.0, mass=1.0, charge_number=1, momentum=(0, 0, 0.01),
                separation=(0, 0, 1e-5), time=1e-13)
    base.update(kw)
    return PhysicalConfig(**base)


def test_thermal_wavelength_room_temperature():
    # hbar c/(k_B 300 K) from CODATA 2018 exact SI values
    assert thermal_wavelength(300.0) == pytest.approx(7.632947e-6, rel=1e-6)


def test_fine_structure_from_charge():
    assert coupling_from_charge() == pytest.approx(FINE_STRUCTURE, rel=1e-9)


def test_constants_hash_is_stable():
    assert constants_hash() == constants_hash()
    assert len(constants_hash()) == 64


def test_resolved_coefficients_values():
    table = {row["name"]: row["value"] for row in RESOLVED_COEFFICIENTS}
    assert table["short_time_wide_separation"] == pytest.approx(2 * math.pi / 9)
    assert table["stationary_short_separation"] == pytest.approx(2 * math.pi / 45)
    assert table["wide_separation_log"] == pytest.approx(4 / (3 * math.pi))
    assert "hbar" in PHYSICAL_CONSTANTS


def test_to_dimensionless_values():
    pt = to_dimensionless(_cfg())
    l_dB = thermal_wavelength(300.0)
    assert pt.y_hat == pytest.approx(1e-5 / l_dB)
    assert pt.tau_hat == pytest.approx(PHYSICAL_CONSTANTS["c"][0] * 1e-13 / l_dB)
    assert pt.v == pytest.approx(0.01)
    assert pt.cos_py == 1.0
    assert pt.alpha_eff == FINE_STRUCTURE


def test_charge_squared_coupling():
    assert to_dimensionless(_cfg(charge_number=-2)).alpha_eff == pytest.approx(4 * FINE_STRUCTURE)


def test_zero_vectors_give_zero_cosine():
    assert to_dimensionless(_cfg(separation=(0, 0, 0))).cos_py == 0.0
    assert to_dimensionless(_cfg(momentum=(0, 0, 0))).cos_py == 0.0


def test_round_trip():
    cfg = _cfg(momentum=(0.003, -0.004, 0.002), separation=(1e-6, 2e-6, -3e-6), charge_number=-1)
    back = from_dimensionless(to_dimensionless(cfg), cfg.temperature, cfg.mass)
    assert np.allclose(back.momentum, cfg.momentum, rtol=1e-12, atol=1e-18)
    assert np.allclose(back.separation, cfg.separation, rtol=1e-12, atol=1e-20)
    assert back.time == pytest.approx(cfg.time, rel=1e-12)
    assert back.charge_number == -1


@pytest.mark.parametrize(
    "kw, field",
    [
        (dict(temperature=0.0), "temperature"),
        (dict(mass=-1.0), "mass"),
        (dict(momentum=(0, 0, 0.1)), "momentum"),
        (dict(time=-1.0), "time"),
        (dict(separation=(0, 0)), "separation"),
    ],
)
def test_invalid_physical_config(kw, field):
    with pytest.raises(ConfigError) as info:
        to_dimensionless(_cfg(**kw))
    assert info.value.field == field


def test_invalid_dimensionless_point():
    with pytest.raises(ConfigError):
        DimensionlessPoint(0.1, 0.01, -1.0, 1.0).validate()
    with pytest.raises(ConfigError):
        DimensionlessPoint(0.1, 0.01, 1.0, 1.0, cos_py=1.5).validate()
