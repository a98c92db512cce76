"""Planck-weighted oscillatory integrals.

Every radial integral in the package has the form

    I(m, trig, a) = int_0^inf k^m trig(a k) / (e^k - 1) dk

with ``trig`` one of ``cos``, ``sin``, ``one_minus_cos`` or ``constant``.  Two
independent evaluators are provided.  :func:`bose_series` expands the Planck
weight as ``sum_n exp(-n k)`` and sums closed-form Laplace transforms, closing
the sum with an Euler-Maclaurin tail.  :func:`bose_adaptive` integrates the
integrand directly with adaptive Gauss-Kronrod panels.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from .errors import ConfigError, QuadratureBudgetError
from .quadrature import adaptive_gauss_kronrod

TRIG_KINDS = ("cos", "sin", "one_minus_cos", "constant")
SERIES_MAX_TERMS = 10**6
ADAPTIVE_MAX_PANELS = 10**5
# below k0 the Planck quotient is replaced by its Taylor expansion
SMALL_K = 1e-3
# frequencies above this need more panels than the default budget allows
ADAPTIVE_FREQUENCY_CAP = 1e3


@dataclass(frozen=True)
class BoseIntegralSpec:
    """One integral ``int_0^inf k^power trig(frequency k) / (e^k - 1) dk``.

    Convergent combinations are ``power = -1`` with ``one_minus_cos``,
    ``power = 0`` with ``sin`` or ``one_minus_cos``, and ``power >= 1`` with
    every kind.  ``power = 0`` with ``cos`` or ``constant`` diverges like
    ``int dk/k`` and is rejected.
    """

    power: int
    trig: str
    frequency: float = 0.0

    def validate(self):
        m, trig, a = self.power, self.trig, self.frequency
        if trig not in TRIG_KINDS:
            raise ConfigError(f"trig must be one of {TRIG_KINDS}, got {trig!r}", field="trig")
        if m not in (-1, 0, 1, 2, 3):
            raise ConfigError(f"power must be in -1..3, got {m!r}", field="power")
        if not (a >= 0 and math.isfinite(a)):
            raise ConfigError(f"frequency must be finite and >= 0, got {a!r}", field="frequency")
        if m == -1 and trig != "one_minus_cos":
            raise ConfigError("power -1 converges only with one_minus_cos", field="trig")
        if m == 0 and trig in ("cos", "constant"):
            raise ConfigError(
                f"power 0 with {trig} diverges logarithmically at k = 0", field="trig"
            )
        return self


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    terms_or_panels: int
    method: str


def is_trivial_zero(spec):
    return spec.frequency == 0.0 and spec.trig in ("sin", "one_minus_cos")


# ---------------------------------------------------------------------------
# closed-form pieces
# ---------------------------------------------------------------------------


def _one_minus_cos_power(p, x, a):
    """``x^-p - Re (x - i a)^-p`` without cancellation, for x > 0."""
    w = a / x
    log1 = np.log1p(w * w)
    rho = np.exp(-0.5 * p * log1)
    theta = np.arctan(w)
    s = np.sin(0.5 * p * theta)
    return x ** (-p) * (-np.expm1(-0.5 * p * log1) + 2.0 * rho * s * s)


def _polar_power(p, x, a):
    """Real and imaginary parts of ``(x - i a)^-p`` for x > 0."""
    w = a / x
    mag = x ** (-p) * np.exp(-0.5 * p * np.log1p(w * w))
    phase = p * np.arctan2(a, x)
    return mag * np.cos(phase), mag * np.sin(phase)


def _pochhammer(p, k):
    out = 1.0
    for j in range(k):
        out *= p + j
    return out


def _derivative(m, trig, a, x, k):
    """k-th derivative of the n-th series term, continued to real n = x."""
    if m == -1:
        # g = 1/2 ln(1 + a^2/x^2);  g^(k) = -(-1)^(k-1) (k-1)! [x^-k - Re(x-ia)^-k]
        if k == 0:
            return 0.5 * np.log1p((a / x) ** 2)
        return (-1.0) ** k * math.factorial(k - 1) * _one_minus_cos_power(k, x, a)
    p = m + 1
    c = math.factorial(m) * (-1.0) ** k * _pochhammer(p, k)
    q = p + k
    if trig == "constant":
        return c * x ** (-q)
    if trig == "one_minus_cos":
        return c * _one_minus_cos_power(q, x, a)
    re, im = _polar_power(q, x, a)
    return c * (re if trig == "cos" else im)


def _tail_integral(m, trig, a, x):
    """``int_x^inf g(n) dn`` for the continued series term ``g``."""
    if m == -1:
        w = a / x
        return a * math.atan(w) - 0.5 * x * math.log1p(w * w)
    p = m + 1
    if p == 1:
        # m = 0: only sin and one_minus_cos reach here
        if trig == "sin":
            return math.atan(a / x)
        return 0.5 * math.log1p((a / x) ** 2)
    c = math.factorial(m) / (p - 1)
    q = p - 1
    if trig == "constant":
        return c * x ** (-q)
    if trig == "one_minus_cos":
        return c * float(_one_minus_cos_power(q, x, a))
    re, im = _polar_power(q, x, a)
    return c * float(re if trig == "cos" else im)


_EM_COEFF = (1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0)  # B_2j/(2j)!


def series_terms(spec, n):
    """Closed-form Laplace integral of the ``n``-th term of the Planck expansion."""
    n = np.asarray(n, dtype=float)
    return _derivative(spec.power, spec.trig, spec.frequency, n, 0)


def bose_series(spec: BoseIntegralSpec, tol=1e-12, max_terms=SERIES_MAX_TERMS) -> QuadratureResult:
    """Sum the Planck expansion term by term with an Euler-Maclaurin remainder.

    The partial sum runs to ``N`` and the remainder ``sum_{n > N}`` is replaced
    by its Euler-Maclaurin expansion through the ``B_6`` term; the ``B_8`` term
    is the error estimate.  ``N`` grows geometrically until the estimate is
    below ``tol``.
    """
    spec.validate()
    if not tol > 0:
        raise ConfigError("tol must be > 0", field="tol")
    if is_trivial_zero(spec):
        return QuadratureResult(0.0, 0.0, 0, "series")
    m, trig, a = spec.power, spec.trig, spec.frequency
    if trig == "cos" and a == 0.0:
        trig = "constant"

    n_terms = max(64, int(math.ceil(4.0 * a)))
    while True:
        if n_terms > max_terms:
            raise QuadratureBudgetError(
                f"series did not reach tol={tol:g} within {max_terms} terms"
            )
        idx = np.arange(1, n_terms + 1, dtype=float)
        terms = _derivative(m, trig, a, idx, 0)
        head = math.fsum(terms)
        x = float(n_terms)
        tail = _tail_integral(m, trig, a, x) - 0.5 * float(_derivative(m, trig, a, x, 0))
        for j, b in enumerate(_EM_COEFF[:3], start=1):
            tail -= b * float(_derivative(m, trig, a, x, 2 * j - 1))
        err = abs(_EM_COEFF[3] * float(_derivative(m, trig, a, x, 7)))
        err += 4.0 * np.finfo(float).eps * (math.fsum(np.abs(terms)) + abs(tail))
        if err <= tol:
            return QuadratureResult(head + tail, float(err), n_terms, "series")
        n_terms *= 4


# ---------------------------------------------------------------------------
# adaptive oracle
# ---------------------------------------------------------------------------

# Bernoulli numbers B_0..B_16 (B_1 = -1/2): k/(e^k - 1) = sum B_j k^j / j!
_BERNOULLI = (1.0, -0.5, 1 / 6, 0.0, -1 / 30, 0.0, 1 / 42, 0.0, -1 / 30, 0.0,
              5 / 66, 0.0, -691 / 2730, 0.0, 7 / 6, 0.0, -3617 / 510)


def _trig_taylor(trig, a, degree):
    c = np.zeros(degree + 1)
    for j in range(degree + 1):
        f = a**j / math.factorial(j)
        if trig == "constant":
            c[j] = 1.0 if j == 0 else 0.0
        elif trig == "cos":
            c[j] = f * (-1) ** (j // 2) if j % 2 == 0 else 0.0
        elif trig == "sin":
            c[j] = f * (-1) ** (j // 2) if j % 2 == 1 else 0.0
        else:
            c[j] = -f * (-1) ** (j // 2) if (j % 2 == 0 and j > 0) else 0.0
    return c


def _small_k_integral(m, trig, a, k0):
    """``int_0^k0`` from the Taylor series of ``k^(m-1) * (k/(e^k-1)) * trig(a k)``."""
    degree = len(_BERNOULLI) - 1
    h = np.array([b / math.factorial(j) for j, b in enumerate(_BERNOULLI)])
    prod = np.convolve(h, _trig_taylor(trig, a, degree))[: degree + 1]
    total = []
    for j, c in enumerate(prod):
        e = j + m  # exponent after integrating k^(j + m - 1)
        if c == 0.0:
            continue
        if e <= 0:
            raise ConfigError("integrand not integrable at k = 0", field="power")
        total.append(c * k0**e / e)
    return math.fsum(total)


def _upper_tail_bound(m, k):
    """Bound on ``int_k^inf k^m |trig| / (e^k - 1)``, using |trig| <= 2."""
    scale = 2.0 / -math.expm1(-k)
    if m == -1:
        return scale * special.exp1(k)
    return scale * special.gammaincc(m + 1, k) * special.gamma(m + 1)


def planck_integrand(spec):
    """Vectorised integrand ``k^m trig(a k)/(e^k - 1)`` for k > 0."""
    m, trig, a = spec.power, spec.trig, spec.frequency

    def f(k):
        k = np.asarray(k, dtype=float)
        w = k**m / np.expm1(k)
        if trig == "cos":
            return w * np.cos(a * k)
        if trig == "sin":
            return w * np.sin(a * k)
        if trig == "one_minus_cos":
            s = np.sin(0.5 * a * k)
            return w * 2.0 * s * s
        return w

    return f


def bose_adaptive(
    spec: BoseIntegralSpec,
    tol=1e-12,
    max_panels=ADAPTIVE_MAX_PANELS,
    k0=SMALL_K,
    frequency_cap=ADAPTIVE_FREQUENCY_CAP,
) -> QuadratureResult:
    """Direct quadrature: Taylor piece on ``[0, k0]``, Gauss-Kronrod panels on
    ``[k0, K_max]`` and an incomplete-gamma bound beyond ``K_max``."""
    spec.validate()
    if not tol > 0:
        raise ConfigError("tol must be > 0", field="tol")
    if is_trivial_zero(spec):
        return QuadratureResult(0.0, 0.0, 0, "adaptive")
    m, trig, a = spec.power, spec.trig, spec.frequency
    if a > frequency_cap:
        raise QuadratureBudgetError(
            f"frequency {a:g} exceeds the adaptive cap of {frequency_cap:g}"
        )

    k_max = 30.0
    while _upper_tail_bound(m, k_max) > 0.1 * tol and k_max < 700.0:
        k_max += 5.0
    tail = _upper_tail_bound(m, k_max)

    head = _small_k_integral(m, trig, a, k0)
    width = 1.0 if a <= 1.0 else math.pi / a
    body, err, panels = adaptive_gauss_kronrod(
        planck_integrand(spec), k0, k_max, 0.8 * tol, max_panels=max_panels,
        initial_width=width,
    )
    return QuadratureResult(head + body, float(err + tail), panels, "adaptive")


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def coth_sin_identity(a):
    """``int_0^inf sin(a k)/(e^k - 1) dk = pi/2 coth(pi a) - 1/(2a)``.

    The value at ``a = 0`` is the continuous extension 0; a Taylor form is used
    for ``a < 1e-3`` where the two terms cancel.
    """
    a = float(a)
    if a < 0:
        raise ConfigError("coth_sin_identity needs a >= 0", field="a")
    if a < 1e-3:
        return math.pi**2 * a / 6.0 - math.pi**4 * a**3 / 90.0 + 2 * math.pi**6 * a**5 / 945.0
    return 0.5 * math.pi / math.tanh(math.pi * a) - 0.5 / a


_SINHC_COEFF = (1 / 6, 1 / 120, 1 / 5040, 1 / 362880, 1 / 39916800, 1 / 6227020800)


def log_sinhc(z):
    """``ln(sinh(z)/z)`` for real z, accurate near 0 and for large |z|."""
    z = np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    small = z < 0.5
    mid = (~small) & (z < 18.0)
    big = z >= 18.0
    zs = z[small] ** 2
    poly = np.zeros_like(zs)
    for c in reversed(_SINHC_COEFF):
        poly = poly * zs + c
    out[small] = np.log1p(zs * poly)
    zm = z[mid]
    out[mid] = np.log(np.sinh(zm) / zm)
    zb = z[big]
    out[big] = zb - np.log(2.0 * zb) + np.log1p(-np.exp(-2.0 * zb))
    return out if out.ndim else float(out)


def log_sinh_ratio(x):
    """``L(x) = ln(sinh(pi x)/(pi x))``; equals ``2 * int k^-1 (1 - cos xk)/(e^k - 1) dk``."""
    return log_sinhc(math.pi * np.asarray(x, dtype=float))


def log_sinh_ratio_slope(x):
    """``dL/dx = pi coth(pi x) - 1/x`` (0 at x = 0)."""
    x = float(x)
    if abs(x) < 1e-3:
        return math.pi**2 * x / 3.0 - math.pi**4 * x**3 / 45.0
    return math.pi / math.tanh(math.pi * x) - 1.0 / x
