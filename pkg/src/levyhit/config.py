"""INI-style run configuration.

Sections: [model] (catalogue kind plus numeric parameters, see
models.to_triplet), [time_change] (kind = linear | cir | piecewise),
optional [scheme] (StepScheme overrides) and [run] (command parameters;
seed is mandatory, there is no wall-clock default).  All values are
validated while parsing, before any compute starts.

Example::

    [model]
    kind = cgmy
    c = 1.0
    lambda_plus = 1.0
    lambda_minus = 1.0
    alpha = 1.5

    [time_change]
    kind = linear
    sigma = 1.0

    [run]
    seed = 42
    eps_grid = 0.2, 0.1, 0.05
    n_reps = 50
    horizon = 1.0
"""

import configparser
from pathlib import Path

from .errors import ParameterError, SchemaError
from .models import LevyTriplet, to_triplet
from .simulate import (
    IntegratedCIR,
    LinearTimeChange,
    PiecewiseLinearTimeChange,
    StepScheme,
)


def load_config(path) -> configparser.ConfigParser:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from exc
    return cp


def _floats(section) -> dict:
    out = {}
    for key, val in section.items():
        if key == "kind":
            continue
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise SchemaError(f"key {key!r}: expected a number, got {val!r}") from exc
    return out


def model_from_config(cp) -> LevyTriplet:
    if "model" not in cp:
        raise SchemaError("config needs a [model] section")
    sec = cp["model"]
    if "kind" not in sec:
        raise SchemaError("[model] needs a 'kind' key")
    return to_triplet({"kind": sec["kind"], **_floats(sec)})


def time_change_from_config(cp):
    if "time_change" not in cp:
        return LinearTimeChange(1.0)
    sec = cp["time_change"]
    kind = sec.get("kind", "linear")
    if kind == "linear":
        return LinearTimeChange(float(sec.get("sigma", 1.0)))
    if kind == "cir":
        return IntegratedCIR(
            kappa=float(sec["kappa"]), theta=float(sec["theta"]),
            xi=float(sec["xi"]), v0=float(sec["v0"]),
        )
    if kind == "piecewise":
        times = tuple(float(x) for x in sec["times"].split(","))
        values = tuple(float(x) for x in sec["values"].split(","))
        return PiecewiseLinearTimeChange(times, values)
    raise SchemaError(f"unknown time change kind {kind!r}")


def scheme_from_config(cp):
    if "scheme" not in cp:
        return None
    fields = _floats(cp["scheme"])
    bridge = cp["scheme"].getboolean("bridge", fallback=True)
    fields.pop("bridge", None)
    try:
        return StepScheme(bridge=bridge, **fields)
    except TypeError as exc:
        raise SchemaError(f"bad [scheme] key: {exc}") from exc


def run_section(cp) -> configparser.SectionProxy:
    if "run" not in cp:
        raise SchemaError("config needs a [run] section")
    return cp["run"]


def require_seed(sec) -> int:
    if "seed" not in sec:
        raise SchemaError("[run] must set an explicit seed")
    try:
        return int(sec["seed"])
    except ValueError as exc:
        raise SchemaError(f"seed must be an integer: {exc}") from exc


def float_list(sec, key) -> list:
    if key not in sec:
        raise SchemaError(f"[run] needs {key!r}")
    try:
        return [float(x) for x in sec[key].replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"{key!r}: {exc}") from exc


def config_as_dict(cp) -> dict:
    return {name: dict(cp[name]) for name in cp.sections()}


def validate_positive(name: str, value: float):
    if not value > 0:
        raise ParameterError(f"{name} must be positive, got {value}")
