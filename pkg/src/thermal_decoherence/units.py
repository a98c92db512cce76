"""Conversion between laboratory units and the reduced coordinates.

Every length is measured in thermal de Broglie wavelengths ``l_dB = hbar c / (k_B T)``
and every time in ``l_dB / c``.  Velocities are in units of ``c``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import FINE_STRUCTURE, HBAR_C_OVER_KB, C_LIGHT
from .errors import ConfigError

# |p|/(mc) must stay below this; the reduced formulas drop O(v) Doppler terms.
MAX_SPEED = 0.1


def _vec3(value, name):
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ConfigError(f"{name} must be a 3-vector, got shape {arr.shape}", field=name)
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be finite", field=name)
    return arr


@dataclass(frozen=True)
class PhysicalConfig:
    """Particle, bath and geometry in laboratory units.

    ``mass`` is in electron masses, ``momentum`` in units of ``m c`` (so it is the
    velocity in units of ``c``), ``separation`` in metres and ``time`` in seconds.
    """

    temperature: float
    mass: float
    charge_number: int
    momentum: tuple
    separation: tuple
    time: float

    def validate(self):
        if not self.temperature > 0 or not math.isfinite(self.temperature):
            raise ConfigError(
                f"temperature must be > 0 K, got {self.temperature!r}", field="temperature"
            )
        if not self.mass > 0 or not math.isfinite(self.mass):
            raise ConfigError(f"mass must be > 0, got {self.mass!r}", field="mass")
        if int(self.charge_number) != self.charge_number:
            raise ConfigError("charge_number must be an integer", field="charge_number")
        p = _vec3(self.momentum, "momentum")
        _vec3(self.separation, "separation")
        speed = float(np.linalg.norm(p))
        if speed >= MAX_SPEED:
            raise ConfigError(
                f"|momentum|/(mc) = {speed:.6g} is outside the non-relativistic window (< {MAX_SPEED})",
                field="momentum",
            )
        if not self.time >= 0 or not math.isfinite(self.time):
            raise ConfigError(f"time must be >= 0 s, got {self.time!r}", field="time")


@dataclass(frozen=True)
class DimensionlessPoint:
    """Reduced coordinates at which all kernels are evaluated.

    ``cos_py`` is 0 by convention when either the momentum or the separation
    vanishes.  ``p_dir``, ``y_dir`` and ``charge_number`` are only carried so that
    :func:`from_dimensionless` can rebuild the original orientation; the kernels
    never read them.
    """

    alpha_eff: float
    v: float
    tau_hat: float
    y_hat: float
    cos_py: float = 1.0
    l_dB: float = float("nan")
    p_dir: tuple = None
    y_dir: tuple = None
    charge_number: int = None

    def validate(self):
        if not self.alpha_eff >= 0:
            raise ConfigError("alpha_eff must be >= 0", field="alpha_eff")
        if not self.v >= 0:
            raise ConfigError("v must be >= 0", field="v")
        if not self.tau_hat >= 0:
            raise ConfigError("tau_hat must be >= 0", field="tau_hat")
        if not self.y_hat >= 0:
            raise ConfigError("y_hat must be >= 0", field="y_hat")
        if not -1.0 <= self.cos_py <= 1.0:
            raise ConfigError("cos_py must lie in [-1, 1]", field="cos_py")
        return self


def thermal_wavelength(temperature):
    """``hbar c / (k_B T)`` in metres."""
    if not temperature > 0:
        raise ConfigError(f"temperature must be > 0 K, got {temperature!r}", field="temperature")
    return HBAR_C_OVER_KB / temperature


def to_dimensionless(cfg: PhysicalConfig) -> DimensionlessPoint:
    cfg.validate()
    l_dB = thermal_wavelength(cfg.temperature)
    p = np.asarray(cfg.momentum, dtype=float)
    y = np.asarray(cfg.separation, dtype=float)
    v = float(np.linalg.norm(p))
    y_len = float(np.linalg.norm(y))
    if v > 0 and y_len > 0:
        cos_py = float(np.clip(np.dot(p, y) / (v * y_len), -1.0, 1.0))
    else:
        cos_py = 0.0
    return DimensionlessPoint(
        alpha_eff=cfg.charge_number**2 * FINE_STRUCTURE,
        v=v,
        tau_hat=C_LIGHT * cfg.time / l_dB,
        y_hat=y_len / l_dB,
        cos_py=cos_py,
        l_dB=l_dB,
        p_dir=tuple(p / v) if v > 0 else None,
        y_dir=tuple(y / y_len) if y_len > 0 else None,
        charge_number=int(cfg.charge_number),
    )


def from_dimensionless(pt: DimensionlessPoint, temperature, mass) -> PhysicalConfig:
    """Rebuild laboratory quantities at the anchor ``temperature`` and ``mass``.

    Without the carried direction fields the momentum is put along z and the
    separation in the x-z plane at the stored angle; without ``charge_number``
    the charge is taken positive.
    """
    if not temperature > 0:
        raise ConfigError("anchor temperature must be > 0 K", field="temperature")
    if not mass > 0:
        raise ConfigError("anchor mass must be > 0", field="mass")
    pt.validate()
    l_dB = thermal_wavelength(temperature)

    if pt.p_dir is not None:
        p_dir = np.asarray(pt.p_dir, dtype=float)
    else:
        p_dir = np.array([0.0, 0.0, 1.0])
    if pt.y_dir is not None:
        y_dir = np.asarray(pt.y_dir, dtype=float)
    else:
        c = pt.cos_py
        y_dir = np.array([math.sqrt(max(0.0, 1.0 - c * c)), 0.0, c])

    if pt.charge_number is not None:
        z = int(pt.charge_number)
    else:
        z = int(round(math.sqrt(pt.alpha_eff / FINE_STRUCTURE)))

    return PhysicalConfig(
        temperature=float(temperature),
        mass=float(mass),
        charge_number=z,
        momentum=tuple(pt.v * p_dir),
        separation=tuple(pt.y_hat * l_dB * y_dir),
        time=pt.tau_hat * l_dB / C_LIGHT,
    )
