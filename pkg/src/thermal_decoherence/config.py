"""Run configuration for the command line tool.

Configuration files use TOML syntax::

    seed = 0
    tol = 1e-9

    [physical]
    temperature = 300.0          # K
    mass = 1.0                   # electron masses
    charge_number = 1
    momentum = [0.0, 0.0, 0.01]  # units of m c
    separation = [0.0, 0.0, 1e-4]  # m
    time = 1e-13                 # s

    [sweep]
    method = "all"               # exact | reduced | regime | all
    tau_hat = {kind = "log", start = 0.1, stop = 10, num = 3}
    y_hat = [0.1, 1.0, 10.0]
    v = [0.01]
    cos_py = 1.0

    [visibility]
    tau_hat = [1.0, 10.0]
    dv = [0.0, 0.01]

    [wigner]
    a = 1.0
    p = 0.3
    b = 0.1
    t = 1.0

    [validate]
    mc_samples = 1000000

A grid is either a list of numbers or a table ``{kind, start, stop, num}``
with ``kind`` ``"linear"`` or ``"log"``; grids must be nonempty and strictly
monotone.  A sweep over physical quantities uses ``temperature``, ``time``
and ``separation`` (a length in metres along the configured separation
direction) instead of the reduced axes.  Command-line flags override file
values.
"""

import copy
import math
import sys

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .constants import FINE_STRUCTURE
from .errors import ConfigError

METHODS = ("exact", "reduced", "regime", "all")
REDUCED_AXES = ("tau_hat", "y_hat", "v")
PHYSICAL_AXES = ("temperature", "time", "separation")

DEFAULTS = {
    "seed": 0,
    "tol": 1e-9,
    "out": "out",
    "physical": {
        "temperature": 300.0,
        "mass": 1.0,
        "charge_number": 1,
        "momentum": [0.0, 0.0, 0.01],
        "separation": [0.0, 0.0, 1e-4],
        "time": 1e-13,
    },
    "sweep": {
        "method": "all",
        "tau_hat": [0.1, 1.0, 10.0],
        "y_hat": [0.1, 1.0, 10.0],
        "v": [0.01],
        "alpha": None,
        "cos_py": 1.0,
        "temperature": None,
        "time": None,
        "separation": None,
    },
    "visibility": {
        "tau_hat": [1.0, 10.0],
        "dv": [0.0, 0.01],
        "alpha": None,
        "axis": [0.0, 0.0, 1.0],
        "screen": None,
    },
    "wigner": {
        "a": 1.0,
        "p": 0.3,
        "b": 0.1,
        "t": 1.0,
        "u_max": 20.0,
        "n_u": 1025,
        "k": None,
    },
    "validate": {
        "mc_samples": 1_000_000,
        "quick_mc_samples": 200_000,
        "trapezoid_n": 64,
    },
}


def _merge(base, extra, path=""):
    for key, value in extra.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}", field=where)
        if isinstance(base[key], dict) and isinstance(value, dict):
            _merge(base[key], value, where + ".")
        else:
            base[key] = value
    return base


def load_config(path=None, overrides=None):
    """Defaults, then the TOML file at ``path``, then ``overrides`` (flat dotted keys)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}", field="config") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}", field="config") from None
        _merge(cfg, data)
        # an explicit physical sweep switches off the default reduced axes
        sweep = data.get("sweep", {})
        if any(a in sweep for a in PHYSICAL_AXES) and not any(a in sweep for a in REDUCED_AXES):
            for a in REDUCED_AXES:
                cfg["sweep"][a] = None
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = cfg
        *parents, leaf = dotted.split(".")
        for p in parents:
            node = node[p]
        node[leaf] = value
    validate_config(cfg)
    return cfg


def expand_grid(spec, name):
    """Materialise a grid spec as a float array."""
    if spec is None:
        return None
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        arr = np.array([float(spec)])
    elif isinstance(spec, dict):
        try:
            kind, start, stop, num = spec["kind"], float(spec["start"]), float(spec["stop"]), int(spec["num"])
        except (KeyError, TypeError, ValueError):
            raise ConfigError(f"grid {name} needs kind, start, stop, num", field=name) from None
        if num < 1:
            raise ConfigError(f"grid {name} must be nonempty", field=name)
        if kind == "linear":
            arr = np.linspace(start, stop, num)
        elif kind == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"log grid {name} needs positive ends", field=name)
            arr = np.geomspace(start, stop, num)
        else:
            raise ConfigError(f"grid {name}: kind must be 'linear' or 'log'", field=name)
    else:
        try:
            arr = np.asarray(spec, dtype=float).ravel()
        except (TypeError, ValueError):
            raise ConfigError(f"grid {name} must be numbers", field=name) from None
    if arr.size == 0:
        raise ConfigError(f"grid {name} must be nonempty", field=name)
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"grid {name} must be finite", field=name)
    if arr.size > 1:
        d = np.diff(arr)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ConfigError(f"grid {name} must be strictly monotone", field=name)
    return arr


def validate_config(cfg):
    if not (isinstance(cfg["tol"], (int, float)) and cfg["tol"] > 0):
        raise ConfigError("tol must be > 0", field="tol")
    if int(cfg["seed"]) != cfg["seed"] or cfg["seed"] < 0:
        raise ConfigError("seed must be a nonnegative integer", field="seed")
    if cfg["sweep"]["method"] not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}", field="sweep.method")
    for section, axes in (("sweep", REDUCED_AXES + PHYSICAL_AXES), ("visibility", ("tau_hat", "dv"))):
        for axis in axes:
            if axis in cfg[section]:
                expand_grid(cfg[section][axis], f"{section}.{axis}")
    w = cfg["wigner"]
    for key in ("a", "u_max"):
        if not w[key] > 0:
            raise ConfigError(f"wigner.{key} must be > 0", field=f"wigner.{key}")
    for key in ("b", "t"):
        if not w[key] >= 0:
            raise ConfigError(f"wigner.{key} must be >= 0", field=f"wigner.{key}")
    if int(w["n_u"]) != w["n_u"] or w["n_u"] < 3 or w["n_u"] % 2 == 0:
        raise ConfigError("wigner.n_u must be an odd integer >= 3", field="wigner.n_u")
    return cfg


def resolved_alpha(section, physical):
    alpha = section.get("alpha")
    if alpha is None:
        return physical["charge_number"] ** 2 * FINE_STRUCTURE
    return float(alpha)


def jsonable(obj):
    """Config echo with numpy values converted and floats kept at full precision."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj
