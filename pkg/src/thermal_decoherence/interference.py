"""Two-packet interference on a screen and the decay of fringe visibility.

Two packets leave the same point with velocities ``v1`` and ``v2``.  Their cross
term in the density matrix picks up a factor ``exp(-S12)`` from the thermal
photons, which is exactly the fringe visibility in this model.

Envelopes are rigid Gaussians translated by ``tau * v_i``; packet spreading is
neglected, consistently with the transport approximation behind the kernel.
Real packets spread, so patterns at long times should be read as envelopes of
the fringe contrast rather than as literal screen images.
"""

from dataclasses import dataclass
import math

import numpy as np

from .bose import log_sinh_ratio
from .errors import ConfigError
from .greens import radial_rule
from .kernels import contracted_sum
from .quadrature import composite_gauss_legendre, uniform_breakpoints
from .units import MAX_SPEED

S12_CONVENTIONS = {
    # coefficient of alpha * dv^2 * L(tau)
    "first_principles": 2.0 / (3.0 * math.pi),
    "printed": 1.0 / (3.0 * math.pi),
}
# overlap below which fringes are not meaningful
MIN_OVERLAP = 1e-2
DENSITY_FLOOR = -1e-12


def s12_closed(tau_hat, dv, alpha, convention="first_principles") -> float:
    """Closed-form cross-term exponent ``c * alpha * dv^2 * L(tau)``.

    ``convention="first_principles"`` uses ``c = 2/(3 pi)``, which is half the
    single-packet coefficient with ``v -> dv`` and is what the double-time
    integral of the four cross kernels gives when drift is dropped.
    ``convention="printed"`` uses ``c = 1/(3 pi)``, the value sometimes quoted
    for the same law.
    """
    if dv < 0:
        raise ConfigError("dv must be >= 0", field="dv")
    try:
        coeff = S12_CONVENTIONS[convention]
    except KeyError:
        raise ConfigError(f"unknown convention {convention!r}", field="convention") from None
    return float(coeff * alpha * dv**2 * log_sinh_ratio(abs(tau_hat)))


def _vec(x, name):
    arr = np.asarray(x, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be a finite 3-vector", field=name)
    return arr


@dataclass(frozen=True)
class TwoPacketConfig:
    """Two packets and a screen, in reduced units.

    ``wavenumber`` is ``m c l_dB / hbar``, which converts a velocity in units of
    ``c`` into a wavenumber in units of ``1/l_dB``.  ``amplitudes`` weight the two
    envelopes; a zero amplitude describes a single packet.
    """

    v1: tuple
    v2: tuple
    packet_width: float
    screen_axis: tuple = (1.0, 0.0, 0.0)
    screen_grid: tuple = ()
    alpha_eff: float = 0.0
    tau_hat: float = 0.0
    wavenumber: float = 1.0
    amplitudes: tuple = (1.0, 1.0)

    def validate(self):
        v1 = _vec(self.v1, "v1")
        v2 = _vec(self.v2, "v2")
        for name, v in (("v1", v1), ("v2", v2)):
            if np.linalg.norm(v) >= MAX_SPEED:
                raise ConfigError(f"|{name}| must be < 0.1", field=name)
        if not self.packet_width > 0:
            raise ConfigError("packet_width must be > 0", field="packet_width")
        axis = _vec(self.screen_axis, "screen_axis")
        if not abs(np.linalg.norm(axis) - 1.0) < 1e-12:
            raise ConfigError("screen_axis must be a unit vector", field="screen_axis")
        grid = np.asarray(self.screen_grid, dtype=float)
        if grid.ndim != 1 or (grid.size > 1 and np.any(np.diff(grid) <= 0)):
            raise ConfigError("screen_grid must be strictly increasing", field="screen_grid")
        if not self.alpha_eff >= 0:
            raise ConfigError("alpha_eff must be >= 0", field="alpha_eff")
        if not self.tau_hat >= 0:
            raise ConfigError("tau_hat must be >= 0", field="tau_hat")
        if not self.wavenumber > 0:
            raise ConfigError("wavenumber must be > 0", field="wavenumber")
        if len(self.amplitudes) != 2 or min(self.amplitudes) < 0:
            raise ConfigError("amplitudes must be two nonnegative numbers", field="amplitudes")
        return self

    @property
    def dv(self):
        return float(np.linalg.norm(np.asarray(self.v1, float) - np.asarray(self.v2, float)))


# ---------------------------------------------------------------------------
# first-principles cross exponent
# ---------------------------------------------------------------------------


def _contraction(a, b, rvec, u, k, w, backend):
    """``a.K(r, u).b`` on a radial rule, for arrays of separations ``rvec[..., 3]``."""
    r = np.sqrt(np.einsum("...i,...i->...", rvec, rvec))
    safe = np.where(r > 0, r, 1.0)
    ar = np.where(r > 0, rvec @ a / safe, 0.0)
    br = np.where(r > 0, rvec @ b / safe, 0.0)
    return contracted_sum(u, r, float(a @ b), ar * br, k, w, backend=backend)


def _s12_raw(v1, v2, tau, order, backend):
    if tau == 0.0:
        return 0.0
    half = uniform_breakpoints(0.0, tau, 1.0)
    brk = np.concatenate((-half[::-1], half[1:]))
    u_nodes, u_w = composite_gauss_legendre(brk, order)
    dv = float(np.linalg.norm(v1 - v2))
    n_sigma = 8 * int(math.ceil(tau * dv + 1.0)) + (order - 12)
    x, wx = np.polynomial.legendre.leggauss(n_sigma)
    vmax = max(np.linalg.norm(v1), np.linalg.norm(v2))
    k, wk = radial_rule(tau * (1.0 + 2.0 * vmax) + 1.0, order=2 * order)

    plus = 0.5 * (v1 + v2)
    minus = 0.5 * (v1 - v2)
    lo = np.abs(u_nodes)
    hi = 2.0 * tau - lo
    sig = 0.5 * (hi + lo)[:, None] + 0.5 * (hi - lo)[:, None] * x[None, :]
    ws = 0.5 * (hi - lo)[:, None] * wx[None, :]
    uu = np.broadcast_to(u_nodes[:, None], sig.shape)
    # self terms depend on u only; they go through the same separation formula
    # as the cross term so the integrand cancels pointwise when v1 = v2
    zero = np.zeros(3)
    u_col = u_nodes[:, None]
    r11 = 0.0 * zero + u_col * v1
    r22 = 0.0 * zero + u_col * v2
    r12 = sig[..., None] * minus + uu[..., None] * plus
    self_terms = (
        _contraction(v1, v1, r11, u_nodes, k, wk, backend)
        + _contraction(v2, v2, r22, u_nodes, k, wk, backend)
    )
    f = self_terms[:, None] - 2.0 * _contraction(v1, v2, r12, uu, k, wk, backend)
    total = [wu * math.fsum(row) for wu, row in zip(u_w, ws * f)]
    # Jacobian of (s, tau) -> (u, sigma) is 1/2
    return 0.5 * math.fsum(total)


def s12_first_principles(config: TwoPacketConfig, tol=1e-9, backend=None):
    """Cross-term exponent from the four double-time kernel integrals, drift kept.

    ``S12 = (alpha/2) int_0^t int_0^t ds dtau [v1.K(r11).v1 + v2.K(r22).v2
    - v1.K(r12).v2 - v2.K(r21).v1]`` with ``r_ij = s v_i - tau v_j``.  The two
    cross terms are equal after ``s <-> tau``.  Integrated on ``u = s - tau`` and
    ``sigma = s + tau``; the integrand vanishes pointwise when ``v1 = v2``.

    Returns ``(value, error_estimate)``.
    """
    config.validate()
    v1 = np.asarray(config.v1, dtype=float)
    v2 = np.asarray(config.v2, dtype=float)
    alpha = config.alpha_eff
    base = _s12_raw(v1, v2, config.tau_hat, 12, backend)
    fine = _s12_raw(v1, v2, config.tau_hat, 16, backend)
    value = 0.5 * alpha * fine
    err = 0.5 * alpha * abs(fine - base)
    if value < 0:
        if value >= -max(tol, 10 * err):
            value = 0.0
        else:
            raise ArithmeticError(f"cross exponent came out negative: {value:.3e}")
    return float(value), float(err)


# ---------------------------------------------------------------------------
# screen pattern
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScreenPattern:
    positions: np.ndarray
    densities: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    cross: np.ndarray
    s12: float
    visibility: float
    fringe_visibility: float
    overlap: float
    status: str


@dataclass(frozen=True)
class VisibilityResult:
    tau_hat: float
    dv: float
    s12_closed: float
    s12_first_principles: float
    visibility: float


def envelope_overlap(config: TwoPacketConfig) -> float:
    """Normalised overlap ``exp(-d^2/(8 sigma^2))`` of the two envelopes on the screen."""
    axis = np.asarray(config.screen_axis, dtype=float)
    d = config.tau_hat * float((np.asarray(config.v1) - np.asarray(config.v2)) @ axis)
    return math.exp(-(d * d) / (8.0 * config.packet_width**2))


def _components(config, x, s12):
    axis = np.asarray(config.screen_axis, dtype=float)
    v1 = np.asarray(config.v1, dtype=float)
    v2 = np.asarray(config.v2, dtype=float)
    a1, a2 = config.amplitudes
    sig = config.packet_width
    c1 = config.tau_hat * float(v1 @ axis)
    c2 = config.tau_hat * float(v2 @ axis)
    phi1 = a1 * np.exp(-((x - c1) ** 2) / (4.0 * sig * sig))
    phi2 = a2 * np.exp(-((x - c2) ** 2) / (4.0 * sig * sig))
    kappa = config.wavenumber
    phase = -kappa * float((v2 - v1) @ axis) * x + 0.5 * kappa * config.tau_hat * (
        float(v2 @ v2) - float(v1 @ v1)
    )
    cross = 2.0 * phi1 * phi2 * np.cos(phase) * math.exp(-s12)
    return phi1 * phi1, phi2 * phi2, cross


def screen_pattern(config: TwoPacketConfig, s12=None, window_points=4001) -> ScreenPattern:
    """Screen density ``|phi1|^2 + |phi2|^2 + 2 phi1 phi2 cos(Phi) exp(-S12)``.

    ``Phi`` carries the momentum difference along the screen and the kinetic
    phase difference.  ``s12`` defaults to :func:`s12_closed`.  The fringe
    visibility ``(max - min)/(max + min)`` is measured over one fringe period
    centred between the envelopes, as a consistency check on ``exp(-S12)``.
    """
    config.validate()
    if s12 is None:
        s12 = s12_closed(config.tau_hat, config.dv, config.alpha_eff)
    if not s12 >= 0:
        raise ConfigError("s12 must be >= 0", field="s12")
    x = np.asarray(config.screen_grid, dtype=float)
    if x.size < 2:
        raise ConfigError("screen_grid needs at least two points", field="screen_grid")
    rho1, rho2, cross = _components(config, x, s12)
    dens = rho1 + rho2 + cross
    peak = float(np.max(np.abs(dens))) if dens.size else 0.0
    if dens.size and dens.min() < DENSITY_FLOOR * max(peak, 1.0):
        raise ArithmeticError(f"negative screen density {dens.min():.3e}")
    dens = np.maximum(dens, 0.0)

    visibility = math.exp(-s12)
    overlap = envelope_overlap(config)
    axis = np.asarray(config.screen_axis, dtype=float)
    dk = config.wavenumber * abs(
        float((np.asarray(config.v2, float) - np.asarray(config.v1, float)) @ axis)
    )
    if min(config.amplitudes) == 0.0:
        status, fringe = "single_packet", float("nan")
    elif overlap < MIN_OVERLAP:
        status, fringe = "no_overlap", float("nan")
    elif dk == 0.0:
        status, fringe = "no_fringes", float("nan")
    else:
        period = 2.0 * math.pi / dk
        mid = 0.5 * config.tau_hat * float(
            (np.asarray(config.v1, float) + np.asarray(config.v2, float)) @ axis
        )
        xw = np.linspace(mid - 0.5 * period, mid + 0.5 * period, window_points)
        r1, r2, cr = _components(config, xw, s12)
        dw = r1 + r2 + cr
        hi, lo = float(dw.max()), float(dw.min())
        fringe = (hi - lo) / (hi + lo)
        status = "ok"
    return ScreenPattern(x, dens, rho1, rho2, cross, float(s12), visibility, fringe, overlap, status)
