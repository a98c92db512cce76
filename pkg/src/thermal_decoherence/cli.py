"""Command line interface: ``sweep``, ``visibility``, ``wigner``, ``validate``, ``constants``.

Exit codes: 0 success, 1 a validation check failed, 2 bad configuration or
unusable output path, 3 a numerical budget was exhausted.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._backend import max_threads
from .bose import BoseIntegralSpec, bose_adaptive, bose_series, coth_sin_identity, log_sinh_ratio
from .config import (
    expand_grid,
    jsonable,
    load_config,
    resolved_alpha,
)
from .constants import PHYSICAL_CONSTANTS, RESOLVED_COEFFICIENTS, constants_hash
from .decoherence import (
    LARGE_Y_COEFF,
    s_exact,
    s_large_y,
    s_reduced,
    s_regime,
    s_small_t_small_y,
    s_stationary,
)
from .errors import ConfigError, QuadratureBudgetError
from .greens import ContractedKernelArgs, coincidence_limit, contracted_kernel
from .interference import TwoPacketConfig, s12_closed, s12_first_principles, screen_pattern
from .kernels import warm_up
from .oracles import make_report, mc_kernel_oracle, trapezoid_s_oracle, zeta_sums
from .units import DimensionlessPoint, PhysicalConfig, to_dimensionless
from .wigner import gaussian_slice, gaussian_wigner, momentum_damping_evolve, wigner_transform

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def fmt(x):
    """17 significant digits, locale independent."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path, payload):
    _write_text(path, json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")


def _sidecar(command, cfg, **extra):
    payload = {
        "command": command,
        "version": __version__,
        # the output path is left out so runs written to different places compare equal
        "config": {k: v for k, v in cfg.items() if k != "out"},
        "constants_hash": constants_hash(),
    }
    payload.update(extra)
    return payload


def _ordered_map(func, items):
    """``[func(x) for x in items]`` on up to ``THERMAL_DECOHERENCE_THREADS`` threads."""
    items = list(items)
    workers = min(max_threads(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    warm_up()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def sweep_points(cfg):
    """Grid points in lexicographic order of their indices."""
    sw = cfg["sweep"]
    phys = cfg["physical"]
    if all(sw.get(a) is None for a in ("tau_hat", "y_hat", "v")):
        sep_dir = np.asarray(phys["separation"], dtype=float)
        norm = np.linalg.norm(sep_dir)

        def axis(name, default):
            spec = sw.get(name)
            return expand_grid(default if spec is None else spec, f"sweep.{name}")

        temps = axis("temperature", phys["temperature"])
        times = axis("time", phys["time"])
        seps = axis("separation", float(norm))
        unit = sep_dir / norm if norm > 0 else np.array([0.0, 0.0, 1.0])
        points = []
        for T in temps:
            for t in times:
                for d in seps:
                    pc = PhysicalConfig(
                        temperature=float(T),
                        mass=float(phys["mass"]),
                        charge_number=int(phys["charge_number"]),
                        momentum=tuple(phys["momentum"]),
                        separation=tuple(float(d) * unit),
                        time=float(t),
                    )
                    pt = to_dimensionless(pc)
                    if sw.get("alpha") is not None:
                        pt = DimensionlessPoint(float(sw["alpha"]), pt.v, pt.tau_hat, pt.y_hat, pt.cos_py, pt.l_dB)
                    points.append(pt)
        return points
    alpha = resolved_alpha(sw, phys)
    taus = expand_grid(sw["tau_hat"], "sweep.tau_hat")
    ys = expand_grid(sw["y_hat"], "sweep.y_hat")
    vs = expand_grid(sw["v"], "sweep.v")
    cos_py = float(sw.get("cos_py", 1.0))
    return [
        DimensionlessPoint(alpha, float(v), float(t), float(y), cos_py).validate()
        for t in taus
        for y in ys
        for v in vs
    ]


def _sweep_row(args):
    pt, method, tol = args
    nan = float("nan")
    ex = s_exact(pt, tol=tol) if method in ("exact", "all") else None
    red = s_reduced(pt, tol=tol) if method in ("reduced", "all") else None
    reg = s_regime(pt) if method in ("regime", "all") else None
    err = ex.error_estimate if ex else (red.error_estimate if red else nan)
    label = reg.regime_label if reg else (ex or red).regime_label
    return [
        pt.tau_hat,
        pt.y_hat,
        pt.v,
        pt.alpha_eff,
        ex.s_value if ex else nan,
        red.s_value if red else nan,
        reg.s_value if reg else nan,
        label,
        err,
    ]


SWEEP_HEADER = ["tau_hat", "y_hat", "v", "alpha", "S_exact", "S_reduced", "S_regime", "regime", "abs_err"]


def cmd_sweep(cfg, out):
    points = sweep_points(cfg)
    method = cfg["sweep"]["method"]
    rows = _ordered_map(_sweep_row, [(pt, method, cfg["tol"]) for pt in points])
    _write_csv(os.path.join(out, "sweep.csv"), SWEEP_HEADER, rows)
    _write_json(os.path.join(out, "sweep.json"), _sidecar("sweep", cfg, rows=len(rows)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# visibility
# ---------------------------------------------------------------------------


def _visibility_row(args):
    tau, dv, alpha, axis, tol = args
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    v1 = tuple(0.5 * dv * axis)
    v2 = tuple(-0.5 * dv * axis)
    closed = s12_closed(tau, dv, alpha)
    cfg = TwoPacketConfig(v1, v2, 1.0, alpha_eff=alpha, tau_hat=tau)
    first, _ = s12_first_principles(cfg, tol=tol)
    return [tau, dv, closed, first, math.exp(-closed)]


def cmd_visibility(cfg, out):
    vis = cfg["visibility"]
    alpha = resolved_alpha(vis, cfg["physical"])
    taus = expand_grid(vis["tau_hat"], "visibility.tau_hat")
    dvs = expand_grid(vis["dv"], "visibility.dv")
    for dv in dvs:
        if not 0 <= dv < 0.1:
            raise ConfigError("visibility.dv must lie in [0, 0.1)", field="visibility.dv")
    jobs = [(float(t), float(d), alpha, vis["axis"], cfg["tol"]) for t in taus for d in dvs]
    rows = _ordered_map(_visibility_row, jobs)
    _write_csv(
        os.path.join(out, "visibility.csv"),
        ["tau_hat", "dv", "S12_closed", "S12_first_principles", "visibility"],
        rows,
    )
    screen = vis.get("screen")
    if screen:
        try:
            grid = expand_grid(screen["grid"], "visibility.screen.grid")
            tau = float(screen["tau_hat"])
            dv = float(screen["dv"])
            width = float(screen.get("packet_width", 1.0))
            kappa = float(screen.get("wavenumber", 1.0))
        except (KeyError, TypeError, ValueError):
            raise ConfigError(
                "visibility.screen needs grid, tau_hat, dv", field="visibility.screen"
            ) from None
        axis = (1.0, 0.0, 0.0)
        tp = TwoPacketConfig(
            (0.5 * dv, 0.0, 0.0), (-0.5 * dv, 0.0, 0.0), width, axis, tuple(grid),
            alpha, tau, kappa,
        )
        pat = screen_pattern(tp)
        _write_csv(
            os.path.join(out, "screen.csv"),
            ["x", "density", "rho1", "rho2", "cross"],
            zip(pat.positions, pat.densities, pat.rho1, pat.rho2, pat.cross),
        )
    _write_json(os.path.join(out, "visibility.json"), _sidecar("visibility", cfg, rows=len(rows)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# wigner
# ---------------------------------------------------------------------------


def cmd_wigner(cfg, out):
    w = cfg["wigner"]
    u = np.linspace(-w["u_max"], w["u_max"], int(w["n_u"]))
    sl = gaussian_slice(u, w["a"], w["p"])
    k = expand_grid(w["k"], "wigner.k") if w["k"] is not None else None
    w0 = wigner_transform(sl, k)
    wt = momentum_damping_evolve(w0, w["b"], w["t"])
    residual = float(np.max(np.abs(w0.values - gaussian_wigner(w0.k_grid, w["a"], w["p"]))))
    _write_csv(os.path.join(out, "wigner.csv"), ["k", "W0", "Wt"], zip(w0.k_grid, w0.values, wt.values))
    _write_json(
        os.path.join(out, "wigner.json"),
        _sidecar("wigner", cfg, gaussian_residual=residual, rows=int(w0.k_grid.size)),
    )
    print(f"gaussian_residual={fmt(residual)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

ADJ_ALPHA = 1.0 / 137.036
ADJ_V = 0.01


def _rel_report(name, oracle, engine, rel_tol, error_bar=0.0):
    return make_report(name, oracle, engine, error_bar, f"relative {rel_tol:g}", rel_tol * abs(oracle))


def _pt(tau, y, v=ADJ_V, alpha=ADJ_ALPHA, cos_py=1.0):
    return DimensionlessPoint(alpha, v, tau, y, cos_py)


def _choose(measured, candidates, error_bar):
    """Which candidate a measured coefficient supports, with relative distances."""
    dist = {name: abs(measured - val) / val for name, val in candidates.items()}
    best = min(dist, key=dist.get)
    others = [d for n, d in dist.items() if n != best]
    return {
        "measured": measured,
        "error_bar": error_bar,
        "candidates": {n: candidates[n] for n in candidates},
        "relative_distance": dist,
        "supported": best,
        "discriminated_at_1pct": bool(dist[best] <= 0.01 and all(d > 0.01 for d in others)),
    }


def validation_checks(cfg, quick):
    """Generator of OracleReports, in a fixed order."""
    seed = int(cfg["seed"])
    val = cfg["validate"]
    for a in (0.1, 1.0, 10.0):
        series = bose_series(BoseIntegralSpec(0, "sin", a))
        yield make_report(f"coth_sin_identity(a={a:g})", coth_sin_identity(a), series.value,
                          series.abs_error_estimate, "absolute 1e-10", 1e-10)
    z2 = zeta_sums(2)
    z4 = zeta_sums(4)
    for m, target, label in ((1, z2, "zeta2"), (3, 6.0 * z4, "6*zeta4")):
        spec = BoseIntegralSpec(m, "constant", 0.0)
        yield make_report(f"{label}:series", target, bose_series(spec).value, 1e-12, "absolute 1e-10", 1e-10)
        yield make_report(f"{label}:adaptive", target, bose_adaptive(spec).value, 1e-12, "absolute 1e-10", 1e-10)
    for spec in (BoseIntegralSpec(-1, "one_minus_cos", 2.0), BoseIntegralSpec(1, "cos", 5.0),
                 BoseIntegralSpec(2, "sin", 3.0)):
        s, ad = bose_series(spec), bose_adaptive(spec)
        tol = 2.0 * 1e-12
        yield make_report(f"bose_cross({spec.power},{spec.trig},{spec.frequency:g})", ad.value, s.value,
                          ad.abs_error_estimate + s.abs_error_estimate, "absolute 2e-12", tol)

    samples = int(val["quick_mc_samples"] if quick else val["mc_samples"])
    for args in (ContractedKernelArgs(0.0, 0.0, 1.0), ContractedKernelArgs(3.0, 1.0, 1.0)):
        yield mc_kernel_oracle(args, samples=samples, seed=seed)
    for tau in (0.5, 1.0, 5.0):
        yield _rel_report(f"coincidence_limit(tau={tau:g})", coincidence_limit(tau),
                          contracted_kernel(ContractedKernelArgs(1e-4, tau, 1.0)), 1e-6)

    grid = [(1.0, 10.0), (10.0, 10.0)] if quick else [(t, y) for t in (0.1, 1.0, 10.0) for y in (0.1, 1.0, 10.0)]
    for tau, y in grid:
        pt = _pt(tau, y)
        ex = s_exact(pt)
        red = s_reduced(pt)
        yield _rel_report(f"exact_vs_reduced(tau={tau:g},y={y:g})", red.s_value, ex.s_value, 0.02)
        yield trapezoid_s_oracle(pt, n=int(val["trapezoid_n"]), engine_value=ex.s_value)

    yield _rel_report("large_y_limit(tau=1,y=1e3)", s_large_y(1.0, ADJ_V, ADJ_ALPHA).s_value,
                      s_reduced(_pt(1.0, 1e3)).s_value, 0.01)
    yield _rel_report("small_t_small_y_limit(0.05,0.05)",
                      s_small_t_small_y(0.05, 0.05, ADJ_V, ADJ_ALPHA).s_value,
                      s_reduced(_pt(0.05, 0.05)).s_value, 0.05)
    yield _rel_report("stationarity(tau=1e3 vs 2e3,y=3)", s_reduced(_pt(2e3, 3.0)).s_value,
                      s_reduced(_pt(1e3, 3.0)).s_value, 1e-3)
    yield _rel_report("stationary_plateau(y=3)", s_stationary(3.0, ADJ_V, ADJ_ALPHA).s_value,
                      s_reduced(_pt(1e3, 3.0)).s_value, 1e-3)

    tau, h = 50.0, 1e-3
    pref = ADJ_ALPHA * ADJ_V**2
    fd = (s_large_y(tau + h, ADJ_V, ADJ_ALPHA).s_value - s_large_y(tau - h, ADJ_V, ADJ_ALPHA).s_value) / (2 * h)
    exact_slope = LARGE_Y_COEFF * pref * (math.pi / math.tanh(math.pi * tau) - 1.0 / tau)
    yield _rel_report("large_y_slope(tau=50)", exact_slope, fd, 1e-6)

    taus = (1.0, 10.0) if quick else (1.0, 10.0, 50.0)
    for tau in taus:
        tp = TwoPacketConfig((0, 0, 0.005), (0, 0, -0.005), 1.0, alpha_eff=ADJ_ALPHA, tau_hat=tau)
        fp, err = s12_first_principles(tp)
        yield make_report(f"s12_band(tau={tau:g},dv=0.01)", s12_closed(tau, 0.01, ADJ_ALPHA), fp, err,
                          "relative 0.1", 0.1 * s12_closed(tau, 0.01, ADJ_ALPHA))


def adjudications(quick):
    """Informational comparisons between competing coefficient values; never fail."""
    pref = ADJ_ALPHA * ADJ_V**2
    out = []

    r = s_reduced(_pt(0.01, 1e3))
    out.append({
        "name": "short_time_wide_separation",
        "point": {"tau_hat": 0.01, "y_hat": 1e3},
        **_choose(r.s_value / (pref * 0.01**2), {"2*pi/9": 2 * math.pi / 9, "pi/9": math.pi / 9},
                  r.error_estimate / (pref * 0.01**2)),
    })
    r = s_reduced(_pt(1e3, 0.01))
    out.append({
        "name": "stationary_short_separation",
        "point": {"tau_hat": 1e3, "y_hat": 0.01},
        **_choose(r.s_value / (pref * 0.01**2), {"2*pi/45": 2 * math.pi / 45, "pi/45": math.pi / 45},
                  r.error_estimate / (pref * 0.01**2)),
    })
    dv = 0.01
    tp = TwoPacketConfig((0, 0, dv / 2), (0, 0, -dv / 2), 1.0, alpha_eff=ADJ_ALPHA, tau_hat=10.0)
    fp, err = s12_first_principles(tp)
    norm = ADJ_ALPHA * dv**2 * float(log_sinh_ratio(10.0))
    out.append({
        "name": "interference_log",
        "point": {"tau_hat": 10.0, "dv": dv},
        **_choose(fp / norm, {"2/(3*pi)": 2 / (3 * math.pi), "1/(3*pi)": 1 / (3 * math.pi)}, err / norm),
    })
    tp = TwoPacketConfig((0, 0, dv / 2), (0, 0, -dv / 2), 1.0, alpha_eff=ADJ_ALPHA, tau_hat=0.05)
    fp, err = s12_first_principles(tp)
    norm = ADJ_ALPHA * dv**2 * 0.05**2
    out.append({
        "name": "interference_short_time",
        "point": {"tau_hat": 0.05, "dv": dv},
        **_choose(fp / norm, {"pi/9": math.pi / 9, "pi/18": math.pi / 18}, err / norm),
    })

    tau = 50.0
    slope = LARGE_Y_COEFF * (math.pi / math.tanh(math.pi * tau) - 1.0 / tau)
    out.append({
        "name": "large_time_slope_asymptote",
        "point": {"tau_hat": tau},
        "measured": slope,
        "asymptote": 4.0 / 3.0,
        "relative_distance": abs(slope - 4.0 / 3.0) / (4.0 / 3.0),
        "note": "finite-time slope (4/3)(coth(pi tau) - 1/(pi tau)); approaches 4/3 only as 1/tau",
    })
    r = s_reduced(_pt(tau, 1e3))
    ly = s_large_y(tau, ADJ_V, ADJ_ALPHA).s_value
    out.append({
        "name": "wide_separation_law_at_tau_50",
        "point": {"tau_hat": tau, "y_hat": 1e3},
        "reduced": r.s_value,
        "closed_form": ly,
        "ratio": r.s_value / ly,
        "note": "the wide-separation law needs tau/y << 1; at tau/y = 0.05 the kernel has not saturated",
    })
    st = s_stationary(50.0, 1.0, 1.0).s_value
    out.append({
        "name": "stationary_wide_separation_asymptote",
        "point": {"y_hat": 50.0},
        "measured": st,
        "leading_term": 25.0,
        "with_log_correction": 25.0 - (2 / math.pi) * ((2 / 3) * math.log(2 * math.pi * 50.0) - 8 / 9),
        "relative_distance_leading": abs(st - 25.0) / 25.0,
    })
    out.append({
        "name": "coincidence_kernel_at_tau_50",
        "measured": coincidence_limit(50.0),
        "leading_term": 4.0 / (3.0 * math.pi) / (2.0 * 50.0**2),
        "note": "decays as 1/(2 tau^2), not exponentially",
    })
    return out


def cmd_validate(cfg, out, quick):
    reports = []
    payload = _sidecar("validate", cfg, quick=bool(quick))
    path = os.path.join(out, "validate_report.json")
    warm_up()
    try:
        for rep in validation_checks(cfg, quick):
            reports.append(rep.to_dict())
        adj = adjudications(quick)
    except QuadratureBudgetError as exc:
        payload.update(checks=reports, adjudication=[], passed=False, error=str(exc))
        _write_json(path, payload)
        print(f"numeric budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    passed = all(r["passed"] for r in reports)
    payload.update(checks=reports, adjudication=adj, passed=passed)
    _write_json(path, payload)
    for r in reports:
        print(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}")
    return EXIT_OK if passed else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def cmd_constants(cfg, out):
    print("physical constants (CODATA 2018)")
    for name, (value, unit, note) in PHYSICAL_CONSTANTS.items():
        print(f"  {name:<10} {value!r:<24} {unit:<10} {note}")
    print(f"  constants hash {constants_hash()}")
    print("resolved coefficients")
    for row in RESOLVED_COEFFICIENTS:
        alt = f"  (alternative {row['alternative'][0]})" if row["alternative"] else ""
        print(f"  {row['name']:<30} {row['expression']:<11} {fmt(row['value']):<22} {row['status']}{alt}")
        print(f"      {row['formula']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--seed", type=int, metavar="N", help="root seed for stochastic oracles")
    common.add_argument("--tol", type=float, metavar="X", help="numerical tolerance")
    common.add_argument("--method", choices=("exact", "reduced", "regime", "all"), help="sweep evaluators")
    common.add_argument("--quick", action="store_true", help="reduced validation subset")
    parser = argparse.ArgumentParser(
        prog="thermal-decoherence",
        description="Thermal-photon decoherence of charged wave packets.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("sweep", "tabulate S over a parameter grid"),
        ("visibility", "interference visibility versus time and velocity difference"),
        ("wigner", "Gaussian Wigner transform and momentum damping"),
        ("validate", "run the oracle suite and write a JSON report"),
        ("constants", "print pinned constants and resolved coefficients"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {"seed": args.seed, "tol": args.tol, "out": args.out, "sweep.method": args.method}
    try:
        cfg = load_config(args.config, overrides)
        out = cfg["out"]
        if args.command == "constants":
            return cmd_constants(cfg, out)
        try:
            os.makedirs(out, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out}: {exc}", field="out") from None
        if args.command == "sweep":
            return cmd_sweep(cfg, out)
        if args.command == "visibility":
            return cmd_visibility(cfg, out)
        if args.command == "wigner":
            return cmd_wigner(cfg, out)
        return cmd_validate(cfg, out, args.quick)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureBudgetError as exc:
        print(f"numeric budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
