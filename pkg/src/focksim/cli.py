"""Command-line front end: config loading, experiment dispatch, CSV output.

Subcommands: ns-amplitude, transform, sweep-delay, sweep-phase, hom.
Angles on the command line are radians; delays and coherence times are
femtoseconds.  Values may come from a JSON config object (--config) and any
flag overrides the matching config key.  Exit codes: 0 success, 2 for
configuration or validation problems, 1 for internal errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    DomainError,
    EmptySweepError,
)
from .evolve import ns_amplitude_pol, ns_pipeline
from .experiments import (
    ExperimentConfig,
    SweepTable,
    dip_visibility,
    fit_fringe,
    fringe_phase_shift,
    sweep_delay,
    sweep_hom_delay,
    sweep_phase,
)

_EXPERIMENTS = ("ns-amplitude", "transform", "sweep-delay", "sweep-phase", "hom")

_ALLOWED_KEYS = {
    "ns-amplitude": {"n", "m", "r", "r_v", "r_h"},
    "transform": {"n", "m", "r", "r_v", "r_h"},
    "sweep-delay": {"theta", "points", "range_fs", "tau_coh_fs", "r_v", "r_h", "background", "out_path"},
    "sweep-phase": {"points", "eta", "r_v", "r_h", "background", "out_path"},
    "hom": {"eta", "points", "range_fs", "tau_coh_fs", "r_v", "r_h", "background", "out_path"},
}

_REQUIRED_KEYS = {
    "ns-amplitude": ("n",),
    "transform": ("n",),
    "sweep-delay": ("theta",),
    "sweep-phase": ("points",),
    "hom": (),
}

_DEFAULTS = {
    "points": 61,
    "eta": 1.0,
    "tau_coh_fs": 100.0,
    "range_fs": [-300.0, 300.0],
    "background": 0.0,
    "r_v": 0.5,
    "r_h": 0.5,
    "m": 0,
}


@dataclass
class RunConfig:
    """One validated experiment invocation."""

    experiment: str
    parameters: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"experiment": self.experiment, **self.parameters}


def _fail(key: str, message: str) -> ConfigValidationError:
    return ConfigValidationError(key, message)


def _validate_number(key: str, value, minimum=None, maximum=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(key, f"key '{key}' must be a number, got {value!r}")
    if integer and value != int(value):
        raise _fail(key, f"key '{key}' must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise _fail(key, f"key '{key}' must be finite")
    if minimum is not None and value < minimum:
        raise _fail(key, f"key '{key}' must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise _fail(key, f"key '{key}' must be <= {maximum}, got {value}")
    return int(value) if integer else float(value)


def validate(config: RunConfig) -> RunConfig:
    """Check key presence, types, and ranges; returns a normalized copy."""
    experiment = config.experiment
    if experiment not in _EXPERIMENTS:
        raise _fail("experiment", f"unknown experiment {experiment!r}; choose from {_EXPERIMENTS}")
    allowed = _ALLOWED_KEYS[experiment]
    for key in config.parameters:
        if key not in allowed:
            raise _fail(key, f"unknown key '{key}' for experiment '{experiment}'")
    params = dict(config.parameters)
    for key in _REQUIRED_KEYS[experiment]:
        if key not in params:
            raise _fail(key, f"experiment '{experiment}' requires key '{key}'")
    if experiment in ("ns-amplitude", "transform"):
        if "r" not in params and not ("r_v" in params and "r_h" in params):
            raise _fail("r", f"experiment '{experiment}' requires key 'r' (or both 'r_v' and 'r_h')")

    checked: dict = {}
    for key, value in params.items():
        if key in ("n", "m"):
            checked[key] = _validate_number(key, value, minimum=0, integer=True)
        elif key == "points":
            minimum = 4 if experiment == "sweep-phase" else 1
            checked[key] = _validate_number(key, value, minimum=minimum, integer=True)
        elif key in ("r", "r_v", "r_h", "eta"):
            checked[key] = _validate_number(key, value, minimum=0.0, maximum=1.0)
        elif key == "tau_coh_fs":
            checked[key] = _validate_number(key, value, minimum=1e-12)
        elif key == "background":
            checked[key] = _validate_number(key, value, minimum=0.0)
        elif key == "theta":
            checked[key] = _validate_number(key, value)
        elif key == "range_fs":
            if (
                not isinstance(value, (list, tuple))
                or len(value) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
            ):
                raise _fail(key, "key 'range_fs' must be a two-element numeric list")
            lo, hi = float(value[0]), float(value[1])
            if lo > hi:
                raise _fail(key, f"key 'range_fs' must be ordered, got [{lo}, {hi}]")
            checked[key] = [lo, hi]
        elif key == "out_path":
            if not isinstance(value, str) or not value:
                raise _fail(key, "key 'out_path' must be a non-empty string")
            checked[key] = value
    return RunConfig(experiment, checked)


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON config file."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigParseError(f"config {path} must hold a JSON object")
    if "experiment" not in raw:
        raise _fail("experiment", "config is missing the 'experiment' key")
    experiment = raw["experiment"]
    if not isinstance(experiment, str):
        raise _fail("experiment", "key 'experiment' must be a string")
    parameters = {key: value for key, value in raw.items() if key != "experiment"}
    return validate(RunConfig(experiment, parameters))


def _format_sig(value: float) -> str:
    # 9 significant digits, trailing zeros kept; +0.0 folds away negative zero
    return format(float(value) + 0.0, "#.9g")


def _format_fixed(value: float) -> str:
    return f"{float(value) + 0.0:.9f}"


def write_csv(table: SweepTable, path: str) -> None:
    """Write a sweep table as UTF-8 CSV, atomically and byte-reproducibly.

    Header first, then one row per x value; every number is rendered with
    nine significant digits, lines end with LF, and the file is staged in a
    temporary sibling and renamed into place only when complete.
    """
    if len(table) == 0:
        raise EmptySweepError("refusing to write an empty table")
    names = [table.x_name, *table.columns]
    lines = [",".join(names)]
    for i, x in enumerate(table.x):
        cells = [_format_sig(x)] + [_format_sig(col[i]) for col in table.columns.values()]
        lines.append(",".join(cells))
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    directory = os.path.dirname(os.path.abspath(path))
    descriptor, staging = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(descriptor, "wb") as handle:
            handle.write(payload)
        os.replace(staging, path)
    except BaseException:
        if os.path.exists(staging):
            os.unlink(staging)
        raise


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its keys")
    common.add_argument("--out", help="CSV output path")
    common.add_argument("--background", type=float, help="additive fourfold accidental floor")
    common.add_argument("--r-v", type=float, dest="r_v", help="splitter reflectivity, V polarization")
    common.add_argument("--r-h", type=float, dest="r_h", help="splitter reflectivity, H polarization")

    parser = argparse.ArgumentParser(
        prog="focksim",
        description="Heralded sign-shift interferometer simulator (angles in radians, delays in femtoseconds)",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)

    ns = sub.add_parser("ns-amplitude", parents=[common], help="closed-form heralded amplitude")
    ns.add_argument("--n", type=int, help="H-polarized photon count")
    ns.add_argument("--m", type=int, help="V-polarized photon count (default 0)")
    ns.add_argument("--r", type=float, help="splitter reflectivity for both polarizations")

    tr = sub.add_parser("transform", parents=[common], help="same amplitude via the full pipeline")
    tr.add_argument("--n", type=int, help="H-polarized photon count")
    tr.add_argument("--m", type=int, help="V-polarized photon count (default 0)")
    tr.add_argument("--r", type=float, help="splitter reflectivity for both polarizations")

    sd = sub.add_parser("sweep-delay", parents=[common], help="fourfold probability vs ancilla delay")
    sd.add_argument("--theta", type=float, help="pair phase in radians")
    sd.add_argument("--from", type=float, dest="range_from", help="first delay in fs")
    sd.add_argument("--to", type=float, dest="range_to", help="last delay in fs")
    sd.add_argument("--points", type=int, help="number of delays")
    sd.add_argument("--tau-coh", type=float, dest="tau_coh_fs", help="coherence time in fs")

    sp = sub.add_parser("sweep-phase", parents=[common], help="two- and fourfold fringes vs phase")
    sp.add_argument("--points", type=int, help="number of phases over [0, 2pi]")
    sp.add_argument("--eta", type=float, help="ancilla overlap in [0, 1]")

    hm = sub.add_parser("hom", parents=[common], help="coincidence-suppression dip vs delay")
    hm.add_argument("--eta", type=float, help="maximum overlap at zero delay")
    hm.add_argument("--from", type=float, dest="range_from", help="first delay in fs")
    hm.add_argument("--to", type=float, dest="range_to", help="last delay in fs")
    hm.add_argument("--points", type=int, help="number of delays")
    hm.add_argument("--tau-coh", type=float, dest="tau_coh_fs", help="coherence time in fs")

    return parser


def _merge(namespace: argparse.Namespace) -> RunConfig:
    experiment = namespace.experiment
    parameters: dict = {}
    if namespace.config:
        parameters.update(load_config(namespace.config).parameters)

    direct = ("n", "m", "r", "theta", "points", "eta", "tau_coh_fs", "background", "r_v", "r_h")
    for key in direct:
        value = getattr(namespace, key, None)
        if value is not None:
            parameters[key] = value
    if getattr(namespace, "out", None) is not None:
        parameters["out_path"] = namespace.out
    range_from = getattr(namespace, "range_from", None)
    range_to = getattr(namespace, "range_to", None)
    if range_from is not None or range_to is not None:
        lo, hi = parameters.get("range_fs", _DEFAULTS["range_fs"])
        parameters["range_fs"] = [
            lo if range_from is None else range_from,
            hi if range_to is None else range_to,
        ]
    return validate(RunConfig(experiment, parameters))


def _param(config: RunConfig, key: str):
    if key in config.parameters:
        return config.parameters[key]
    return _DEFAULTS.get(key)


def _experiment_settings(config: RunConfig, hwp_rotation: float = 45.0) -> ExperimentConfig:
    return ExperimentConfig(
        r_v=_param(config, "r_v"),
        r_h=_param(config, "r_h"),
        hwp_rotation=hwp_rotation,
        tau_coh_fs=_param(config, "tau_coh_fs"),
        background=_param(config, "background"),
    )


def _reflectivities(config: RunConfig) -> tuple[float, float]:
    r = config.parameters.get("r")
    return config.parameters.get("r_v", r), config.parameters.get("r_h", r)


def _grid(config: RunConfig) -> list[float]:
    lo, hi = _param(config, "range_fs")
    points = _param(config, "points")
    if points > 1 and lo == hi:
        raise ConfigValidationError("range_fs", "key 'range_fs' must span an interval for points > 1")
    return [float(v) for v in np.linspace(lo, hi, points)]


def _emit(pairs: list[tuple[str, str]]) -> None:
    print(" ".join(f"{key}={value}" for key, value in pairs))


def _run(config: RunConfig) -> None:
    experiment = config.experiment
    out_path = config.parameters.get("out_path")

    if experiment == "ns-amplitude":
        r_v, r_h = _reflectivities(config)
        value = ns_amplitude_pol(_param(config, "m"), config.parameters["n"], r_v, r_h)
        _emit([("amplitude", _format_fixed(value))])
        return

    if experiment == "transform":
        r_v, r_h = _reflectivities(config)
        result = ns_pipeline(_param(config, "m"), config.parameters["n"], r_v, r_h)
        _emit(
            [
                ("amplitude", _format_fixed(result.amplitude.real)),
                ("probability", _format_fixed(result.probability)),
            ]
        )
        return

    if experiment == "sweep-delay":
        table = sweep_delay(config.parameters["theta"], _grid(config), _experiment_settings(config))
        if out_path:
            write_csv(table, out_path)
        values = table.column("fourfold")
        _emit(
            [
                ("points", str(len(table))),
                ("fourfold_min", _format_fixed(min(values))),
                ("fourfold_max", _format_fixed(max(values))),
            ]
        )
        return

    if experiment == "sweep-phase":
        thetas = [float(v) for v in np.linspace(0.0, 2.0 * math.pi, _param(config, "points"))]
        table = sweep_phase(thetas, _param(config, "eta"), _experiment_settings(config))
        if out_path:
            write_csv(table, out_path)
        two = fit_fringe(zip(table.x, table.column("twofold")))
        four = fit_fringe(zip(table.x, table.column("fourfold")))
        _emit(
            [
                ("phase_shift", _format_fixed(fringe_phase_shift(table))),
                ("twofold_amplitude", _format_fixed(two.amplitude)),
                ("fourfold_amplitude", _format_fixed(four.amplitude)),
            ]
        )
        return

    if experiment == "hom":
        table = sweep_hom_delay(_grid(config), _experiment_settings(config), _param(config, "eta"))
        if out_path:
            write_csv(table, out_path)
        values = table.column("fourfold")
        _emit(
            [
                ("visibility", _format_fixed(dip_visibility(values))),
                ("fourfold_min", _format_fixed(min(values))),
                ("fourfold_max", _format_fixed(max(values))),
            ]
        )
        return

    raise ConfigValidationError("experiment", f"unknown experiment {experiment!r}")


def execute(argv: Sequence[str]) -> int:
    """Run one command line; returns the process exit code."""
    parser = _build_parser()
    try:
        namespace = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        _run(_merge(namespace))
        return 0
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure, including I/O
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
