"""Wigner transform of density-matrix slices and momentum-damping diagnostics.

Everything is one dimensional, along the packet axis, with ``hbar = 1``:
separations ``u`` in ``l_dB`` and wavenumbers ``k`` in ``1/l_dB``.

Two objects are kept apart on purpose.  :func:`momentum_damping_evolve` applies
``W -> exp(-b k^2 t) W``, the solution of ``dW/dt = -b k^2 W``.
:func:`double_commutator_apply` applies the generator ``-b [P, [P, rho]]``,
which in centre/separation coordinates is ``b d^2 rho/dq^2``.  For a
translation-invariant ``rho(u)`` the generator vanishes identically, so the
damping law does not follow from it as an operator identity; the two sides
are provided separately for inspection.

Coupling to a position operator instead of the momentum is not implemented.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigError, NyquistError

HERMITICITY_TOL = 1e-10
REALNESS_TOL = 1e-10


@dataclass(frozen=True)
class DensitySlice:
    """``rho(q + u/2, q - u/2)`` at fixed centre ``q`` on a symmetric uniform ``u`` grid."""

    u_grid: np.ndarray
    values: np.ndarray

    def validate(self):
        u = np.asarray(self.u_grid, dtype=float)
        rho = np.asarray(self.values, dtype=complex)
        if u.ndim != 1 or u.size < 3 or rho.shape != u.shape:
            raise ConfigError("u_grid and values must be 1D arrays of equal length >= 3", field="u_grid")
        du = np.diff(u)
        if np.any(du <= 0) or np.ptp(du) > 1e-9 * du.mean():
            raise ConfigError("u_grid must be uniform and increasing", field="u_grid")
        if np.max(np.abs(u + u[::-1])) > 1e-9 * np.max(np.abs(u)):
            raise ConfigError("u_grid must be symmetric about 0", field="u_grid")
        scale = max(np.max(np.abs(rho)), 1e-300)
        if np.max(np.abs(rho - np.conj(rho[::-1]))) > HERMITICITY_TOL * scale:
            raise ConfigError("slice is not Hermitian: rho(-u) != conj(rho(u))", field="values")
        return self

    @property
    def spacing(self):
        return float(self.u_grid[1] - self.u_grid[0])


@dataclass(frozen=True)
class WignerGrid:
    k_grid: np.ndarray
    values: np.ndarray
    imag_residue: float = 0.0


@dataclass(frozen=True)
class CenteredDensity:
    """``rho(q + u/2, q - u/2)`` on a product grid; ``values[i, j]`` at ``(q_i, u_j)``."""

    q_grid: np.ndarray
    u_grid: np.ndarray
    values: np.ndarray


def gaussian_slice(u_grid, a, p):
    """``rho(u) = exp(-a u^2/2 - i p u)``."""
    u = np.asarray(u_grid, dtype=float)
    return DensitySlice(u, np.exp(-0.5 * a * u * u - 1j * p * u))


def gaussian_wigner(k, a, p):
    """Closed-form transform of :func:`gaussian_slice`: a Gaussian at ``p`` with variance ``a``."""
    k = np.asarray(k, dtype=float)
    return math.sqrt(2.0 * math.pi / a) / (2.0 * math.pi) * np.exp(-((k - p) ** 2) / (2.0 * a))


def nyquist_limit(slice_: DensitySlice):
    return math.pi / slice_.spacing


def wigner_transform(slice_: DensitySlice, k_grid=None) -> WignerGrid:
    """``W(k) = (1/2 pi) int du exp(i k u) rho(u)`` by the trapezoid rule.

    ``k_grid`` defaults to as many points as the ``u`` grid spread over the
    Nyquist band ``|k| <= pi/du``.  Requested wavenumbers outside that band
    raise :class:`NyquistError`.
    """
    slice_.validate()
    u = np.asarray(slice_.u_grid, dtype=float)
    rho = np.asarray(slice_.values, dtype=complex)
    kmax = nyquist_limit(slice_)
    if k_grid is None:
        k = np.linspace(-kmax, kmax, u.size)
    else:
        k = np.asarray(k_grid, dtype=float)
        if np.any(np.abs(k) > kmax * (1 + 1e-12)):
            raise NyquistError(
                f"k up to {np.max(np.abs(k)):.4g} exceeds the Nyquist limit {kmax:.4g} of the u grid",
                field="k_grid",
            )
    w = np.full(u.size, slice_.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    phase = np.exp(1j * np.outer(k, u))
    out = phase @ (w * rho) / (2.0 * math.pi)
    scale = max(np.max(np.abs(out)), 1e-300)
    residue = float(np.max(np.abs(out.imag)) / scale)
    if residue > REALNESS_TOL:
        raise ConfigError(f"transform is not real (relative residue {residue:.2e})", field="values")
    return WignerGrid(k, out.real.copy(), residue)


def momentum_damping_evolve(grid: WignerGrid, b, t) -> WignerGrid:
    """``W_t(k) = exp(-b k^2 t) W_0(k)``."""
    if b < 0 or t < 0:
        raise ConfigError("b and t must be >= 0", field="b" if b < 0 else "t")
    k = np.asarray(grid.k_grid, dtype=float)
    return WignerGrid(k, np.exp(-b * t * k * k) * np.asarray(grid.values), grid.imag_residue)


def double_commutator_apply(rho: CenteredDensity, b) -> CenteredDensity:
    """``-b [P, [P, rho]] = b d^2 rho/dq^2`` by finite differences in the centre ``q``.

    Second-order central differences inside, second-order one-sided stencils
    at the two ends.  Needs a uniform ``q`` grid with at least 4 points.
    """
    if b < 0:
        raise ConfigError("b must be >= 0", field="b")
    q = np.asarray(rho.q_grid, dtype=float)
    vals = np.asarray(rho.values, dtype=complex)
    if q.ndim != 1 or q.size < 4 or vals.shape[0] != q.size:
        raise ConfigError("need at least 4 centre points matching values", field="q_grid")
    dq = np.diff(q)
    if np.any(dq <= 0) or np.ptp(dq) > 1e-9 * dq.mean():
        raise ConfigError("q_grid must be uniform and increasing", field="q_grid")
    h2 = dq.mean() ** 2
    d2 = np.empty_like(vals)
    d2[1:-1] = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / h2
    d2[0] = (2.0 * vals[0] - 5.0 * vals[1] + 4.0 * vals[2] - vals[3]) / h2
    d2[-1] = (2.0 * vals[-1] - 5.0 * vals[-2] + 4.0 * vals[-3] - vals[-4]) / h2
    return CenteredDensity(q, np.asarray(rho.u_grid, dtype=float), b * d2)


def momentum_pair_density(q_grid, u_grid, k1, k2):
    """``<x|k1><k2|x'>`` in centre/separation coordinates: eigenvector of the generator."""
    q = np.asarray(q_grid, dtype=float)[:, None]
    u = np.asarray(u_grid, dtype=float)[None, :]
    vals = np.exp(1j * (k1 - k2) * q + 0.5j * (k1 + k2) * u)
    return CenteredDensity(q[:, 0], u[0], vals)
