"""Pinned physical constants and the table of resolved order-one coefficients.

All values are CODATA 2018 recommended values (exact where the 2019 SI fixes
them).  Nothing here is read from a library so that every number produced by
the package is reproducible bit for bit.
"""

import hashlib
import json
import math

PHYSICAL_CONSTANTS = {
    # name: (value, unit, note)
    "hbar": (1.054571817e-34, "J s", "CODATA 2018, exact"),
    "c": (299792458.0, "m s^-1", "exact"),
    "k_B": (1.380649e-23, "J K^-1", "exact"),
    "e": (1.602176634e-19, "C", "exact"),
    "epsilon_0": (8.8541878128e-12, "F m^-1", "CODATA 2018"),
    "m_e": (9.1093837015e-31, "kg", "CODATA 2018"),
    "alpha": (7.2973525693e-3, "1", "CODATA 2018"),
}

HBAR = PHYSICAL_CONSTANTS["hbar"][0]
C_LIGHT = PHYSICAL_CONSTANTS["c"][0]
K_B = PHYSICAL_CONSTANTS["k_B"][0]
E_CHARGE = PHYSICAL_CONSTANTS["e"][0]
EPSILON_0 = PHYSICAL_CONSTANTS["epsilon_0"][0]
M_E = PHYSICAL_CONSTANTS["m_e"][0]
FINE_STRUCTURE = PHYSICAL_CONSTANTS["alpha"][0]

# hbar*c/k_B in m K; l_dB(T) = HBAR_C_OVER_KB / T
HBAR_C_OVER_KB = HBAR * C_LIGHT / K_B


def coupling_from_charge() -> float:
    """e^2/(4 pi eps0 hbar c) from the pinned SI values; agrees with ``alpha``."""
    return E_CHARGE**2 / (4.0 * math.pi * EPSILON_0 * HBAR * C_LIGHT)


def constants_hash() -> str:
    payload = json.dumps(
        {k: repr(v[0]) for k, v in PHYSICAL_CONSTANTS.items()}, sort_keys=True
    )
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


# Order-one coefficients of the asymptotic decoherence exponents, resolved by
# quadrature.  ``alternative`` is the competing value sometimes quoted for the
# same coefficient; ``status`` says which one the first-principles evaluators
# support.
RESOLVED_COEFFICIENTS = [
    {
        "name": "short_time_wide_separation",
        "expression": "2*pi/9",
        "value": 2 * math.pi / 9,
        "formula": "S ~ c * alpha * v^2 * tau^2   (tau << 1 << y)",
        "alternative": ("pi/9", math.pi / 9),
        "status": "supported",
    },
    {
        "name": "wide_separation_log",
        "expression": "4/(3*pi)",
        "value": 4 / (3 * math.pi),
        "formula": "S = c * alpha * v^2 * ln(sinh(pi tau)/(pi tau))   (y >> 1)",
        "alternative": None,
        "status": "supported",
    },
    {
        "name": "short_time_short_separation",
        "expression": "2*pi^3/225",
        "value": 2 * math.pi**3 / 225,
        "formula": "S ~ c * alpha * v^2 * tau^2 * y^2   (tau, y << 1)",
        "alternative": None,
        "status": "supported",
    },
    {
        "name": "stationary_short_separation",
        "expression": "2*pi/45",
        "value": 2 * math.pi / 45,
        "formula": "S ~ c * alpha * v^2 * y^2   (y << 1 << tau)",
        "alternative": ("pi/45", math.pi / 45),
        "status": "supported",
    },
    {
        "name": "stationary_wide_separation",
        "expression": "1/2",
        "value": 0.5,
        "formula": "S ~ c * alpha * v^2 * y   (1 << y << tau)",
        "alternative": None,
        "status": "supported",
    },
    {
        "name": "interference_short_time",
        "expression": "pi/18",
        "value": math.pi / 18,
        "formula": "S12 ~ c * alpha * dv^2 * tau^2   (tau << 1)",
        "alternative": ("pi/9", math.pi / 9),
        "status": "superseded: first-principles quadrature gives pi/9",
    },
    {
        "name": "interference_log",
        "expression": "1/(3*pi)",
        "value": 1 / (3 * math.pi),
        "formula": "S12 = c * alpha * dv^2 * ln(sinh(pi tau)/(pi tau))",
        "alternative": ("2/(3*pi)", 2 / (3 * math.pi)),
        "status": "superseded: first-principles quadrature gives 2/(3*pi)",
    },
]
