"""Decoherence exponent ``S`` of a free charged wave packet in a thermal photon bath.

``|rho_t(x, x')| = envelope * exp(-S)``.  Three families of evaluators:

* :func:`s_exact` keeps the drift of the trajectories inside the kernel and an
  arbitrary angle between momentum and separation;
* :func:`s_reduced` drops the drift and fixes the separation along the
  momentum, which turns the integrand into a manifestly nonnegative product;
* closed forms valid in the four asymptotic regimes.

All of them return ``S`` including the prefactor ``alpha_eff * v**2``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .bose import log_sinh_ratio
from .constants import FINE_STRUCTURE
from .errors import ConfigError, NegativeExponentError
from .greens import RADIAL_CUTOFF, radial_rule
from .kernels import contracted_sum, planck_pair, transverse_weights_array
from .quadrature import composite_gauss_legendre, uniform_breakpoints
from .units import MAX_SPEED, DimensionlessPoint

REGIME_LABELS = (
    "small_t_large_y",
    "large_t_large_y",
    "small_t_small_y",
    "large_t_small_y",
    "general",
)
# inside this band around 1 no asymptotic form is trusted
GENERAL_BAND = (0.5, 2.0)

LARGE_Y_COEFF = 4.0 / (3.0 * math.pi)
SMALL_T_SMALL_Y_COEFF = 2.0 * math.pi**3 / 225.0
STATIONARY_SMALL_Y_COEFF = 2.0 * math.pi / 45.0
SHORT_TIME_COEFF = 2.0 * math.pi / 9.0


@dataclass(frozen=True)
class DecoherencePoint:
    pt: DimensionlessPoint


@dataclass(frozen=True)
class DecoherenceResult:
    s_value: float
    method: str
    error_estimate: float
    regime_label: str
    clamped: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def coherence(self):
        return math.exp(-self.s_value)


def _unwrap(point) -> DimensionlessPoint:
    pt = point.pt if isinstance(point, DecoherencePoint) else point
    pt.validate()
    if pt.v >= MAX_SPEED:
        raise ConfigError(f"v = {pt.v:g} is outside the non-relativistic window", field="v")
    return pt


def _finish(raw, err, tol, method, pt, details=None):
    clamped = False
    if raw < 0.0:
        if raw >= -max(tol, 10.0 * err):
            clamped = True
            raw = 0.0
        else:
            raise NegativeExponentError(
                f"{method} produced S = {raw:.3e} (error estimate {err:.1e})"
            )
    return DecoherenceResult(
        s_value=float(raw),
        method=method,
        error_estimate=float(err),
        regime_label=regime_classify(pt),
        clamped=clamped,
        details=details or {},
    )


# ---------------------------------------------------------------------------
# exact double-time integral
# ---------------------------------------------------------------------------


def _geometry(pt, u):
    """Separations and squared cosines for the three kernel terms at lag ``u``.

    Momentum along z, separation in the x-z plane.  All three norms go through
    the same arithmetic so that ``y_hat = 0`` cancels exactly.
    """
    c = pt.cos_py
    s = math.sqrt(max(0.0, 1.0 - c * c))
    drift = u * pt.v
    out = []
    for sign in (0.0, 1.0, -1.0):
        x = sign * pt.y_hat * s + 0.0 * u
        z = sign * pt.y_hat * c + drift
        r = np.sqrt(x * x + z * z)
        with np.errstate(invalid="ignore", divide="ignore"):
            cos2 = np.where(r > 0, (z / np.where(r > 0, r, 1.0)) ** 2, 0.0)
        out.append((r, cos2))
    return out


def _lag_integrand(pt, u, k, w, backend):
    (r1, c1), (r2, c2), (r3, c3) = _geometry(pt, u)
    k1 = contracted_sum(u, r1, 1.0, c1, k, w, backend=backend)
    k2 = contracted_sum(u, r2, 1.0, c2, k, w, backend=backend)
    k3 = contracted_sum(u, r3, 1.0, c3, k, w, backend=backend)
    return k1 - 0.5 * k2 - 0.5 * k3


def _s_exact_raw(pt, order, backend):
    tau = pt.tau_hat
    if tau == 0.0:
        return 0.0
    u, wu = composite_gauss_legendre(uniform_breakpoints(0.0, tau, 1.0), order)
    omega = tau + pt.y_hat + tau * pt.v
    k, wk = radial_rule(omega, order=2 * order)
    f = _lag_integrand(pt, u, k, wk, backend)
    return 2.0 * math.fsum(wu * (tau - u) * f)


def s_exact(point, tol=1e-9, backend=None) -> DecoherenceResult:
    """Exact exponent with drift and arbitrary momentum/separation angle.

    ``S = alpha v^2 * 2 int_0^tau (tau - u) f(u) du`` with
    ``f(u) = K(r_0(u), u) - K(r_+(u), u)/2 - K(r_-(u), u)/2`` and
    ``r_0 = u v p``, ``r_+- = +-y + u v p``; the double time integral is folded
    onto the lag ``u`` by evenness of the kernel in time.  The error estimate
    is the change between 12- and 16-point panel rules.
    """
    pt = _unwrap(point)
    pref = pt.alpha_eff * pt.v**2
    base = _s_exact_raw(pt, 12, backend)
    fine = _s_exact_raw(pt, 16, backend)
    err = abs(fine - base) * pref
    return _finish(pref * fine, err, tol, "exact", pt, {"coarse": pref * base})


# ---------------------------------------------------------------------------
# reduced (drift-free, y parallel to p)
# ---------------------------------------------------------------------------


def _s_reduced_mu(tau, y, order, backend):
    """``(4/pi) int_0^1 (1 - mu^2) C(tau, y mu) dmu`` integrated in ``b = y mu``."""
    if tau == 0.0 or y == 0.0:
        return 0.0
    extra = [tau] if tau < y else []
    brk = uniform_breakpoints(0.0, y, 0.5, extra=extra)
    b, wb = composite_gauss_legendre(brk, order)
    mu = b / y
    c = planck_pair(np.full_like(b, tau), b, backend=backend)
    return 4.0 / math.pi * math.fsum(wb / y * (1.0 - mu * mu) * c)


def _s_reduced_radial(tau, y, order, backend):
    """``(4/pi) int dk k^-1 (1 - cos k tau) g(k y)/(e^k - 1)``, ``g = 2/3 - T_delta - T_r``."""
    if tau == 0.0 or y == 0.0:
        return 0.0
    width = min(1.0, 6.0 * math.pi / (tau + y))
    k, w = composite_gauss_legendre(uniform_breakpoints(0.0, RADIAL_CUTOFF, width), order)
    td, tr = transverse_weights_array(k * y, backend=backend)
    s = np.sin(0.5 * k * tau)
    integrand = 2.0 * s * s / (k * np.expm1(k)) * (2.0 / 3.0 - td - tr)
    return 4.0 / math.pi * math.fsum(w * integrand)


def s_reduced(point, tol=1e-9, method="mu", backend=None) -> DecoherenceResult:
    """Drift-free exponent with the separation along the momentum.

    The angular-radial integrand factorises as
    ``2(1 - cos k tau)(1 - cos(k y cos theta)) >= 0``.  The default ``method="mu"``
    does the radial integral in closed form, leaving a smooth integral over the
    direction cosine; ``method="radial"`` does the angular integral in closed
    form instead and is kept as an independent route.
    """
    pt = _unwrap(point)
    if method not in ("mu", "radial"):
        raise ConfigError(f"unknown s_reduced method {method!r}", field="method")
    pref = pt.alpha_eff * pt.v**2
    tau, y = pt.tau_hat, pt.y_hat
    if method == "mu":
        base = _s_reduced_mu(tau, y, 16, backend)
        fine = _s_reduced_mu(tau, y, 24, backend)
    else:
        base = _s_reduced_radial(tau, y, 24, backend)
        fine = _s_reduced_radial(tau, y, 32, backend)
    err = abs(fine - base) * pref
    return _finish(pref * fine, err, tol, "reduced", pt, {"route": method})


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def s_large_y(tau_hat, v, alpha) -> DecoherenceResult:
    """``(4/(3 pi)) alpha v^2 ln(sinh(pi tau)/(pi tau))``; slope tends to ``(4/3) alpha v^2``."""
    value = LARGE_Y_COEFF * alpha * v**2 * log_sinh_ratio(abs(tau_hat))
    label = "small_t_large_y" if abs(tau_hat) < 1 else "large_t_large_y"
    return DecoherenceResult(float(value), "large_y", 0.0, label)


def s_small_t_small_y(tau_hat, y_hat, v, alpha) -> DecoherenceResult:
    """``(2 pi^3/225) alpha v^2 tau^2 y^2``."""
    value = SMALL_T_SMALL_Y_COEFF * alpha * v**2 * tau_hat**2 * y_hat**2
    return DecoherenceResult(float(value), "small_t_small_y", 0.0, "small_t_small_y")


def s_stationary(y_hat, v, alpha, order=24) -> DecoherenceResult:
    """Long-time plateau ``(2/pi) alpha v^2 int_0^1 (1 - mu^2) L(mu y) dmu``.

    Behaves as ``(2 pi/45) alpha v^2 y^2`` for small ``y`` and as
    ``alpha v^2 [y/2 - (2/pi)((2/3) ln(2 pi y) - 8/9)]`` for large ``y``.
    """
    y = float(y_hat)
    if y < 0:
        raise ConfigError("y_hat must be >= 0", field="y_hat")
    if y == 0.0:
        return DecoherenceResult(0.0, "large_t_small_y", 0.0, "large_t_small_y")
    b, wb = composite_gauss_legendre(uniform_breakpoints(0.0, y, 1.0), order)
    mu = b / y
    integral = math.fsum(wb / y * (1.0 - mu * mu) * log_sinh_ratio(b))
    value = 2.0 / math.pi * alpha * v**2 * integral
    label = "large_t_small_y" if y < 1 else "large_t_large_y"
    return DecoherenceResult(float(value), "stationary", 0.0, label)


def regime_classify(point) -> str:
    """Label by ``tau_hat`` and ``y_hat`` against 1; ``general`` if either lies in [0.5, 2].

    For wide separations the time band is ignored while ``tau_hat < y_hat``:
    the wide-separation law holds at every time before the light cone reaches ``y``.
    """
    pt = point.pt if isinstance(point, DecoherencePoint) else point
    tau, y = pt.tau_hat, pt.y_hat
    lo, hi = GENERAL_BAND
    if y > hi and tau < y:
        return "small_t_large_y" if tau < 1 else "large_t_large_y"
    if lo <= tau <= hi or lo <= y <= hi:
        return "general"
    t_part = "small_t" if tau < 1 else "large_t"
    y_part = "small_y" if y < 1 else "large_y"
    return f"{t_part}_{y_part}"


def s_regime(point) -> DecoherenceResult:
    """Closed form matching the regime label; NaN in the ``general`` band."""
    pt = point.pt if isinstance(point, DecoherencePoint) else point
    pt.validate()
    label = regime_classify(pt)
    tau, y, v, a = pt.tau_hat, pt.y_hat, pt.v, pt.alpha_eff
    if label == "small_t_large_y":
        res = s_large_y(tau, v, a)
    elif label == "large_t_large_y":
        # the wide-separation law holds until the light cone reaches y
        res = s_large_y(tau, v, a) if tau < y else s_stationary(y, v, a)
    elif label == "small_t_small_y":
        res = s_small_t_small_y(tau, y, v, a)
    elif label == "large_t_small_y":
        res = s_stationary(y, v, a)
    else:
        return DecoherenceResult(float("nan"), "none", float("nan"), label)
    return DecoherenceResult(res.s_value, res.method, float("nan"), label)


# ---------------------------------------------------------------------------
# many particles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleSpec:
    charges: tuple
    velocities: tuple

    def validate(self):
        if len(self.charges) == 0:
            raise ConfigError("ensemble must contain at least one particle", field="charges")
        if len(self.charges) != len(self.velocities):
            raise ConfigError("charges and velocities differ in length", field="velocities")
        vel = np.asarray(self.velocities, dtype=float)
        if vel.ndim != 2 or vel.shape[1] != 3:
            raise ConfigError("velocities must be an N x 3 array", field="velocities")
        if np.any(np.linalg.norm(vel, axis=1) >= MAX_SPEED):
            raise ConfigError("every |velocity| must be < 0.1", field="velocities")
        for z in self.charges:
            if int(z) != z:
                raise ConfigError("charges must be integers", field="charges")
        return self


def ensemble_quadratic_form(ensemble: EnsembleSpec) -> float:
    """``Q = sum_jk z_j z_k v_j.v_k = |sum_j z_j v_j|^2`` with compensated sums."""
    ensemble.validate()
    z = np.asarray(ensemble.charges, dtype=float)
    vel = np.asarray(ensemble.velocities, dtype=float)
    total = [math.fsum(z * vel[:, i]) for i in range(3)]
    return math.fsum(t * t for t in total)


def n_particle_exponent(ensemble: EnsembleSpec, tau_hat, alpha_unit=FINE_STRUCTURE) -> float:
    """``S_N = (4/(3 pi)) L(tau) alpha Q`` in the coincident-kernel approximation.

    Identical charges with identical velocities give ``N^2`` times the single
    particle value; a neutral ensemble with a common velocity gives 0.
    """
    q = ensemble_quadratic_form(ensemble)
    return LARGE_Y_COEFF * float(log_sinh_ratio(abs(tau_hat))) * alpha_unit * q


def random_isotropic_ensemble(n, speed, seed):
    """``n`` unit charges of random sign with isotropic velocities of fixed ``speed``."""
    rng = np.random.default_rng(seed)
    charges = rng.choice([-1, 1], size=n)
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return EnsembleSpec(tuple(int(c) for c in charges), tuple(map(tuple, speed * d)))
