"""Momentum-contracted thermal photon kernel.

Normalisation note
------------------
All kernels here are fully dimensionless.  With ``k`` measured in ``k_B T/(hbar c)``,
distances in ``l_dB`` and times in ``l_dB/c``,

    K(y, tau, c) = (2/pi) int_0^inf dk k/(e^k - 1) cos(k tau) [T_delta(k y) + c^2 T_r(k y)]

where ``c`` is the cosine between the momentum and the spatial argument.  The
physical prefactor (coupling times speed squared) is applied once, in
:mod:`thermal_decoherence.decoherence`; nothing in this module multiplies by
``alpha`` or ``v``.

The angular average of the transverse projector against ``cos(k.r)`` is
``T_delta(u) delta_jl + T_r(u) rhat_j rhat_l`` with ``u = k |r|``, so the 3D
k-integral collapses to the single radial integral above.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from .bose import BoseIntegralSpec, bose_series
from .errors import ConfigError
from .kernels import contracted_sum, transverse_weights_array
from .quadrature import adaptive_gauss_kronrod, composite_gauss_legendre, uniform_breakpoints

KERNEL_AT_ORIGIN = 2.0 * math.pi / 9.0
# the Planck weight is below 1e-17 past this wavenumber
RADIAL_CUTOFF = 40.0


@dataclass(frozen=True)
class ContractedKernelArgs:
    y_hat: float
    tau_hat: float
    cos_pr: float = 1.0
    v: float = 0.0

    def validate(self):
        if not self.y_hat >= 0 or not math.isfinite(self.y_hat):
            raise ConfigError("y_hat must be finite and >= 0", field="y_hat")
        if not math.isfinite(self.tau_hat):
            raise ConfigError("tau_hat must be finite", field="tau_hat")
        if not -1.0 <= self.cos_pr <= 1.0:
            raise ConfigError("cos_pr must lie in [-1, 1]", field="cos_pr")
        return self


def transverse_weights(u):
    """``(T_delta(u), T_r(u))`` for ``u >= 0``.

    ``T_delta = j0 - j1/u`` and ``T_r = -j0 + 3 j1/u``; a Taylor series is used
    below ``u = 1`` where the Bessel differences cancel.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0):
        raise ConfigError("transverse weights need u >= 0", field="u")
    td, tr = transverse_weights_array(u_arr)
    if td.ndim == 0:
        return float(td), float(tr)
    return td, tr


def _radial_tail_bound(k_max):
    # (2/pi) int_K^inf k/(e^k - 1) dk with |T_delta + c^2 T_r| <= 1
    return 2.0 / math.pi * special.gammaincc(2, k_max) / -math.expm1(-k_max)


def contracted_kernel(args: ContractedKernelArgs, tol=1e-11, max_panels=100_000, return_error=False):
    """``K(y, tau, cos_pr)`` by adaptive Gauss-Kronrod on the Bessel-weighted integrand."""
    args.validate()
    y, tau, c2 = args.y_hat, abs(args.tau_hat), args.cos_pr**2
    if y == 0.0:
        value = coincidence_limit(tau)
        return (value, 1e-15) if return_error else value

    def f(k):
        td, tr = transverse_weights_array(k * y)
        return (2.0 / math.pi) * k / np.expm1(k) * np.cos(k * tau) * (td + c2 * tr)

    omega = max(1.0, tau + y)
    value, err, _ = adaptive_gauss_kronrod(
        f, 0.0, RADIAL_CUTOFF, tol, max_panels=max_panels, initial_width=min(1.0, math.pi / omega)
    )
    err += _radial_tail_bound(RADIAL_CUTOFF)
    return (value, err) if return_error else value


def coincidence_limit(tau_hat, tol=1e-13):
    """``K(0, tau) = (4/(3 pi)) int k cos(k tau)/(e^k - 1) dk``; ``2 pi/9`` at ``tau = 0``."""
    tau = abs(float(tau_hat))
    res = bose_series(BoseIntegralSpec(1, "cos", tau), tol=tol)
    return 4.0 / (3.0 * math.pi) * res.value


def radial_rule(omega, order=24, k_max=RADIAL_CUTOFF, max_width=2.0):
    """Composite Gauss-Legendre rule on ``[0, k_max]`` with the Planck factor folded in.

    Panel width is capped at ``6 pi/omega`` so every panel sees at most three
    periods of the fastest oscillation ``omega``.
    """
    width = min(max_width, 6.0 * math.pi / max(omega, 1e-300))
    k, w = composite_gauss_legendre(uniform_breakpoints(0.0, k_max, width), order)
    return k, w * (2.0 / math.pi) * k / np.expm1(k)


def kernel_on_rule(tau, r, cos2, k, w, backend=None):
    """Vectorised ``K`` at many ``(tau, |r|, cos^2)`` triples on a fixed radial rule."""
    return contracted_sum(tau, r, 1.0, cos2, k, w, backend=backend)
