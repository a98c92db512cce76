"""Brute-force evaluators used to check the engine.

None of these share integrand code with the engine; they only share the
package constants.  The Monte Carlo kernel samples the raw 3D wavevector
integral, the trapezoid oracle sums the double time integral on a square grid
with a kernel computed through a different one-dimensional representation,
and the zeta oracle sums a power series directly.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
import math

import numpy as np
from scipy import special

from ._backend import max_threads
from .errors import ConfigError

MC_BLOCK = 2**15
ZETA_TERMS = 10**6


@dataclass(frozen=True)
class OracleReport:
    name: str
    oracle_value: float
    engine_value: float
    abs_diff: float
    rel_diff: float
    error_bar: float
    tolerance_name: str
    tolerance: float
    passed: bool

    def to_dict(self):
        return asdict(self)


def make_report(name, oracle_value, engine_value, error_bar, tolerance_name, tolerance):
    diff = abs(oracle_value - engine_value)
    scale = max(abs(oracle_value), abs(engine_value))
    rel = diff / scale if scale > 0 else 0.0
    return OracleReport(
        name=name,
        oracle_value=float(oracle_value),
        engine_value=float(engine_value),
        abs_diff=float(diff),
        rel_diff=float(rel),
        error_bar=float(error_bar),
        tolerance_name=tolerance_name,
        tolerance=float(tolerance),
        passed=bool(diff <= tolerance),
    )


# ---------------------------------------------------------------------------
# Monte Carlo over wavevectors
# ---------------------------------------------------------------------------


def _mc_block(seed_seq, size, y_hat, tau_hat, cos_pr):
    rng = np.random.default_rng(seed_seq)
    # k ~ k/(e^k - 1)/zeta(2): a mixture of Gamma(2, 1/m) with weights m^-2/zeta(2)
    m = rng.zipf(2.0, size=size).astype(float)
    k = rng.gamma(2.0, size=size) / m
    cz = rng.uniform(-1.0, 1.0, size=size)
    phi = rng.uniform(0.0, 2.0 * math.pi, size=size)
    sz = np.sqrt(1.0 - cz * cz)
    kx, kz = sz * np.cos(phi), cz
    sin_pr = math.sqrt(max(0.0, 1.0 - cos_pr * cos_pr))
    k_dot_r = k * y_hat * (kx * sin_pr + kz * cos_pr)
    # momentum along z: p.(1 - khat khat).p = 1 - kz^2
    g = np.cos(k * tau_hat) * (1.0 - kz * kz) * np.cos(k_dot_r)
    return math.fsum(g), math.fsum(g * g)


def mc_kernel_oracle(args, samples=10**6, seed=0, engine_value=None, n_sigma=3.0, threads=None):
    """Monte Carlo estimate of the contracted kernel straight from the 3D k-integral.

    ``K = (pi/3) E[cos(k tau) (1 - (khat.phat)^2) cos(k.r)]`` with ``k`` drawn from
    the normalised Planck density ``k/(e^k - 1)/zeta(2)`` and ``khat`` isotropic.
    Samples are drawn in fixed blocks, each seeded from ``SeedSequence(seed)``,
    and merged in block order, so the estimate does not depend on ``threads``.
    """
    if samples < 10**4:
        raise ConfigError("mc_kernel_oracle needs at least 1e4 samples", field="samples")
    y, tau, c = float(args.y_hat), float(args.tau_hat), float(args.cos_pr)
    n_blocks = -(-samples // MC_BLOCK)
    sizes = [MC_BLOCK] * (n_blocks - 1) + [samples - MC_BLOCK * (n_blocks - 1)]
    seeds = np.random.SeedSequence(seed).spawn(n_blocks)
    workers = min(threads or max_threads(), n_blocks)
    jobs = list(zip(seeds, sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _mc_block(j[0], j[1], y, tau, c), jobs))
    else:
        parts = [_mc_block(s, n, y, tau, c) for s, n in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    scale = math.pi / 3.0
    value = scale * mean
    stderr = scale * math.sqrt(var / samples)
    if engine_value is None:
        from .greens import contracted_kernel

        engine_value = contracted_kernel(args)
    return make_report(
        f"mc_kernel(y={y:g},tau={tau:g},cos={c:g})",
        value,
        engine_value,
        stderr,
        f"{n_sigma:g} standard errors",
        n_sigma * stderr,
    )


# ---------------------------------------------------------------------------
# square-grid trapezoid of the double time integral
# ---------------------------------------------------------------------------


def _planck_cosine(a):
    """``D(a) = int_0^inf k cos(a k)/(e^k - 1) dk = 1/(2a^2) - pi^2/(2 sinh^2(pi a))``."""
    a = np.abs(np.asarray(a, dtype=float))
    out = np.empty_like(a)
    small = a < 0.1
    x = a[small] ** 2
    acc = np.zeros_like(x)
    for j in range(12, -1, -1):
        acc = acc * x + (-1) ** j * (2 * j + 1) * special.zeta(2 * j + 2)
    out[small] = acc
    b = a[~small]
    with np.errstate(over="ignore"):
        sh = np.sinh(math.pi * b)
    out[~small] = 0.5 / (b * b) - 0.5 * math.pi**2 / (sh * sh)
    return out


def oracle_kernel(y, tau, cos2, order=20):
    """Kernel from the direction-cosine representation.

    ``K = (1/pi) int_{-1}^{1} dmu w(mu) D(tau + y mu)`` with
    ``w(mu) = (1 + c^2)/2 - mu^2 (3 c^2 - 1)/2``; ``y``, ``tau``, ``cos2`` arrays.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    tau = np.broadcast_to(np.asarray(tau, dtype=float), y.shape)
    cos2 = np.broadcast_to(np.asarray(cos2, dtype=float), y.shape)
    panels = int(math.ceil(2.0 * float(np.max(y)))) + 1
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    mu = (mid[:, None] + half[:, None] * x).ravel()
    wm = (half[:, None] * w).ravel()
    weight = 0.5 * (1.0 + cos2[:, None]) - 0.5 * mu[None, :] ** 2 * (3.0 * cos2[:, None] - 1.0)
    d = _planck_cosine(tau[:, None] + y[:, None] * mu[None, :])
    return (weight * d) @ wm / math.pi


def _lag_function(pt, lags):
    c = pt.cos_py
    s = math.sqrt(max(0.0, 1.0 - c * c))
    total = np.zeros_like(lags)
    for sign, factor in ((0.0, 1.0), (1.0, -0.5), (-1.0, -0.5)):
        x = sign * pt.y_hat * s + 0.0 * lags
        z = sign * pt.y_hat * c + lags * pt.v
        r = np.sqrt(x * x + z * z)
        cos2 = np.where(r > 0, z * z / np.where(r > 0, r * r, 1.0), 0.0)
        total = total + factor * oracle_kernel(r, lags, cos2)
    return total


def _square_trapezoid(pt, n):
    tau = pt.tau_hat
    h = tau / n
    w = np.full(n + 1, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    # sum_ij w_i w_j f((i - j) h): group the (n+1)^2 pairs by their difference
    diffs = np.arange(-n, n + 1)
    coeff = np.correlate(w, w, mode="full")
    f = _lag_function(pt, diffs * h)
    return math.fsum(coeff * f)


def trapezoid_s_oracle(point, n=64, engine_value=None, n_sigma=1.0):
    """Square-grid trapezoid of the double time integral, Richardson-extrapolated.

    The integrand is the three-kernel combination at every pair ``(s_i, tau_j)``
    on an ``(n+1) x (n+1)`` grid, without folding onto the lag.  The estimate is
    ``T_2n + (T_2n - T_n)/3`` and the error bar ``|T_2n - T_n|/3``.
    """
    pt = point.pt if hasattr(point, "pt") else point
    if n < 64:
        raise ConfigError("trapezoid_s_oracle needs n >= 64", field="n")
    pref = pt.alpha_eff * pt.v**2
    if pt.tau_hat == 0.0 or pref == 0.0:
        t_n = t_2n = 0.0
    else:
        t_n = _square_trapezoid(pt, n)
        t_2n = _square_trapezoid(pt, 2 * n)
    value = pref * (t_2n + (t_2n - t_n) / 3.0)
    bar = pref * abs(t_2n - t_n) / 3.0
    if engine_value is None:
        from .decoherence import s_exact

        res = s_exact(pt)
        engine_value = res.s_value
        engine_err = res.error_estimate
    else:
        engine_err = 0.0
    combined = bar + engine_err + 1e-14 * abs(value)
    return make_report(
        f"trapezoid_s(tau={pt.tau_hat:g},y={pt.y_hat:g},v={pt.v:g})",
        value,
        engine_value,
        bar,
        f"{n_sigma:g} x combined error bar",
        n_sigma * combined,
    )


# ---------------------------------------------------------------------------
# zeta values by direct summation
# ---------------------------------------------------------------------------


def zeta_sums(s, terms=ZETA_TERMS, return_error=False):
    """``zeta(s)`` for ``s`` in {2, 4} from a compensated partial sum plus tail bracket.

    The tail ``sum_{n > N} n^-s`` lies between the integrals of ``x^-s`` from
    ``N+1`` and from ``N``; the midpoint is added and the half width is the error.
    """
    if s not in (2, 4):
        raise ConfigError(f"zeta_sums supports s in {{2, 4}}, got {s!r}", field="s")
    n = np.arange(1, terms + 1, dtype=float)
    head = math.fsum(n ** (-float(s)))
    upper = terms ** (1 - s) / (s - 1)
    lower = (terms + 1) ** (1 - s) / (s - 1)
    value = head + 0.5 * (upper + lower)
    err = 0.5 * (upper - lower)
    return (value, err) if return_error else value


def zeta_partial_sums(s, checkpoints):
    """Partial sums ``sum_{n <= N} n^-s`` at each ``N`` in ``checkpoints``."""
    return [math.fsum(np.arange(1, int(c) + 1, dtype=float) ** (-float(s))) for c in checkpoints]
