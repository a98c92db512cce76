"""Hot inner loops, each written once for numba and once in plain numpy.

The public wrappers at the bottom dispatch on :func:`selected_backend`.  Both
paths evaluate the same formulas; they differ only in summation order, so
results agree to a few ulps rather than bit for bit.
"""

import math

import numpy as np

from ._backend import njit, selected_backend
from .bose import log_sinhc

# |u| below which the spherical-Bessel weights use their Taylor series
BESSEL_TAYLOR_CUT = 1.0

# Taylor coefficients (in u^2) of T_delta = j0 - j1/u and T_r = -j0 + 3 j1/u
_TD = np.array([
    (-1) ** n * (1.0 / math.factorial(2 * n + 1) - (2 * n + 2) / math.factorial(2 * n + 3))
    for n in range(11)
])
_TR = np.array([
    (-1) ** n * (-1.0 / math.factorial(2 * n + 1) + 3 * (2 * n + 2) / math.factorial(2 * n + 3))
    for n in range(11)
])

_SINHC = np.array([1 / 6, 1 / 120, 1 / 5040, 1 / 362880, 1 / 39916800, 1 / 6227020800])

_PAIR_TERMS = 64
_ZETA4_TAIL = math.pi**4 / 90 - math.fsum(n**-4.0 for n in range(1, _PAIR_TERMS + 1))
_ZETA6_TAIL = math.pi**6 / 945 - math.fsum(n**-6.0 for n in range(1, _PAIR_TERMS + 1))


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit
def _weights_scalar(u, td_c, tr_c):
    if u < BESSEL_TAYLOR_CUT:
        z = u * u
        td = 0.0
        tr = 0.0
        for i in range(td_c.size - 1, -1, -1):
            td = td * z + td_c[i]
            tr = tr * z + tr_c[i]
        return td, tr
    s = math.sin(u)
    c = math.cos(u)
    j0 = s / u
    j1u = (s / u - c) / (u * u)
    return j0 - j1u, -j0 + 3.0 * j1u


@njit
def _weights_nb(u, td_c, tr_c):
    td = np.empty(u.size)
    tr = np.empty(u.size)
    for i in range(u.size):
        td[i], tr[i] = _weights_scalar(u[i], td_c, tr_c)
    return td, tr


@njit
def _contracted_sum_nb(tau, r, wd, wr, k, w, td_c, tr_c):
    out = np.empty(tau.size)
    for i in range(tau.size):
        acc = 0.0
        ri = r[i]
        ti = tau[i]
        ai = wd[i]
        bi = wr[i]
        for j in range(k.size):
            td, tr = _weights_scalar(k[j] * ri, td_c, tr_c)
            acc += w[j] * math.cos(k[j] * ti) * (ai * td + bi * tr)
        out[i] = acc
    return out


@njit
def _log_sinhc_scalar(z, coeff):
    z = abs(z)
    if z < 0.5:
        zs = z * z
        p = 0.0
        for i in range(coeff.size - 1, -1, -1):
            p = p * zs + coeff[i]
        return math.log1p(zs * p)
    if z < 18.0:
        return math.log(math.sinh(z) / z)
    return z - math.log(2.0 * z) + math.log1p(-math.exp(-2.0 * z))


@njit
def _half_l(x, coeff):
    return 0.5 * _log_sinhc_scalar(math.pi * x, coeff)


@njit
def _pair_scalar(a, b, coeff, z4, z6):
    a = abs(a)
    b = abs(b)
    big = max(a, b)
    small = min(a, b)
    if small == 0.0:
        return 0.0
    if big <= 1.0:
        s = a * a + b * b
        q = a * a * b * b
        d = (a * a - b * b) ** 2
        acc = 0.0
        for n in range(_PAIR_TERMS, 0, -1):
            n2 = float(n * n)
            n4 = n2 * n2
            acc += math.log1p(q * (6.0 * n4 + 2.0 * n2 * s + q) / (n4 * (n4 + 2.0 * n2 * s + d)))
        return 0.25 * acc + 1.5 * q * z4 - 2.5 * q * s * z6
    if small <= 0.01:
        x = math.pi * big
        sh = math.sinh(x) if x < 350.0 else math.inf
        csch2 = 1.0 / (sh * sh)
        coth = 1.0 / math.tanh(x)
        j2 = 0.5 * (1.0 / (big * big) - math.pi**2 * csch2)
        j4 = 3.0 / big**4 - math.pi**4 * (2.0 * coth * coth * csch2 + csch2 * csch2)
        s2 = small * small
        return _half_l(small, coeff) - 0.5 * s2 * j2 - s2 * s2 / 24.0 * j4
    return (
        _half_l(a, coeff) + _half_l(b, coeff)
        - 0.5 * _half_l(a + b, coeff) - 0.5 * _half_l(a - b, coeff)
    )


@njit
def _pair_nb(a, b, coeff, z4, z6):
    out = np.empty(a.size)
    for i in range(a.size):
        out[i] = _pair_scalar(a[i], b[i], coeff, z4, z6)
    return out


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------


def _weights_np(u):
    u = np.asarray(u, dtype=float)
    td = np.empty_like(u)
    tr = np.empty_like(u)
    lo = u < BESSEL_TAYLOR_CUT
    z = u[lo] ** 2
    td[lo] = np.polyval(_TD[::-1], z)
    tr[lo] = np.polyval(_TR[::-1], z)
    x = u[~lo]
    s = np.sin(x)
    c = np.cos(x)
    j0 = s / x
    j1u = (s / x - c) / (x * x)
    td[~lo] = j0 - j1u
    tr[~lo] = -j0 + 3.0 * j1u
    return td, tr


def _contracted_sum_np(tau, r, wd, wr, k, w, chunk=256):
    out = np.empty(tau.size)
    for start in range(0, tau.size, chunk):
        sl = slice(start, start + chunk)
        x = r[sl, None] * k[None, :]
        td, tr = _weights_np(x)
        integrand = np.cos(tau[sl, None] * k[None, :]) * (wd[sl, None] * td + wr[sl, None] * tr)
        out[sl] = integrand @ w
    return out


def _half_l_np(x):
    return 0.5 * log_sinhc(math.pi * np.asarray(x, dtype=float))


def _pair_np(a, b):
    a = np.abs(np.asarray(a, dtype=float))
    b = np.abs(np.asarray(b, dtype=float))
    big = np.maximum(a, b)
    small = np.minimum(a, b)
    out = np.zeros_like(a)

    series = (small > 0) & (big <= 1.0)
    if np.any(series):
        aa, bb = a[series], b[series]
        s = aa * aa + bb * bb
        q = aa * aa * bb * bb
        d = (aa * aa - bb * bb) ** 2
        n2 = np.arange(_PAIR_TERMS, 0, -1, dtype=float) ** 2
        n4 = n2 * n2
        frac = q[:, None] * (6.0 * n4 + 2.0 * n2 * s[:, None] + q[:, None]) / (
            n4 * (n4 + 2.0 * n2 * s[:, None] + d[:, None])
        )
        out[series] = (
            0.25 * np.log1p(frac).sum(axis=1) + 1.5 * q * _ZETA4_TAIL - 2.5 * q * s * _ZETA6_TAIL
        )

    thin = (small > 0) & (big > 1.0) & (small <= 0.01)
    if np.any(thin):
        bg, sm = big[thin], small[thin]
        x = math.pi * bg
        with np.errstate(over="ignore"):
            sh = np.where(x < 350.0, np.sinh(np.minimum(x, 350.0)), np.inf)
        csch2 = 1.0 / (sh * sh)
        coth = 1.0 / np.tanh(x)
        j2 = 0.5 * (1.0 / bg**2 - math.pi**2 * csch2)
        j4 = 3.0 / bg**4 - math.pi**4 * (2.0 * coth * coth * csch2 + csch2 * csch2)
        s2 = sm * sm
        out[thin] = _half_l_np(sm) - 0.5 * s2 * j2 - s2 * s2 / 24.0 * j4

    rest = (small > 0) & (big > 1.0) & (small > 0.01)
    if np.any(rest):
        aa, bb = a[rest], b[rest]
        out[rest] = (
            _half_l_np(aa) + _half_l_np(bb) - 0.5 * _half_l_np(aa + bb) - 0.5 * _half_l_np(aa - bb)
        )
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _flat(x):
    return np.ascontiguousarray(np.asarray(x, dtype=float).ravel())


def transverse_weights_array(u, backend=None):
    """``(T_delta(u), T_r(u))`` elementwise for ``u >= 0``."""
    arr = np.asarray(u, dtype=float)
    backend = backend or selected_backend()
    if backend == "numba":
        td, tr = _weights_nb(_flat(arr), _TD, _TR)
    else:
        td, tr = _weights_np(_flat(arr))
    return td.reshape(arr.shape), tr.reshape(arr.shape)


def contracted_sum(tau, r, wd, wr, k, w, backend=None):
    """``sum_j w_j cos(k_j tau_i) [wd_i T_delta(k_j r_i) + wr_i T_r(k_j r_i)]`` for every i.

    ``k`` and ``w`` are the nodes and weights of a radial rule that already
    contains the Planck factor.  For the contraction ``a.G.b`` the weights are
    ``wd = a.b`` and ``wr = (a.rhat)(b.rhat)``.  ``tau``, ``r``, ``wd`` and
    ``wr`` broadcast together.
    """
    tau, r, wd, wr = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (tau, r, wd, wr)))
    shape = tau.shape
    args = (_flat(tau), _flat(r), _flat(wd), _flat(wr), _flat(k), _flat(w))
    backend = backend or selected_backend()
    if backend == "numba":
        out = _contracted_sum_nb(*args, _TD, _TR)
    else:
        out = _contracted_sum_np(*args)
    return out.reshape(shape)


def planck_pair(a, b, backend=None):
    """``C(a, b) = J(a) + J(b) - J(a+b)/2 - J(a-b)/2`` with ``J = L/2``.

    Equals ``int_0^inf (1 - cos a k)(1 - cos b k) / (k (e^k - 1)) dk``; it is
    nonnegative and vanishes when either argument does.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    shape = a.shape
    backend = backend or selected_backend()
    if backend == "numba":
        out = _pair_nb(_flat(a), _flat(b), _SINHC, _ZETA4_TAIL, _ZETA6_TAIL)
    else:
        out = _pair_np(_flat(a), _flat(b))
    return out.reshape(shape)


def warm_up():
    """Compile the numba kernels on the calling thread before any worker pool starts."""
    if selected_backend() != "numba":
        return
    x = np.array([0.5, 2.0])
    transverse_weights_array(x)
    contracted_sum(x, x, x, x, x, x)
    planck_pair(x, x)
