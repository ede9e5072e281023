"""Command-line front end.

``--omega`` is the cavity frequency and ``--Omega`` (capital O) the atomic
transition frequency; they differ only in case. All frequencies share one
unit (conventionally units of Omega).

Examples::

    fewphoton spectrum --Omega 1 --g 0.025 --kappa-range 0:0.25:0.001 --n 1,2,3
    fewphoton g2 --Omega 1 --g 0.1 --kappa 0.4 --tau-max 80 --points 2048
    fewphoton sweep-tightness --g 1 --kappa-range 2:8:0.1
    fewphoton boundstate --g 0.1 --kappa 0.4 --output b.csv     # also writes b.csv.meta.json

Settings come from ``--config FILE`` (JSON, ``"schema": 1``) with command-line
flags taking precedence; ``--dump-config`` prints the resolved configuration
and exits. Failures exit with status 2 and a JSON object
``{"error": <name>, "message": ...}`` on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import export
from .boundstate import (default_tau_grid, generic_bound_profile, oracle_bound_profile, resonant_profile,
                         tail_decay_rate)
from .correlation import g2_curve
from .errors import FewPhotonError, InvalidArgumentError
from .model import SystemParams, eigenvalues, exceptional_point_kappa, sweep_spectrum
from .nphoton import envelope_general, envelope_resonant

log = logging.getLogger("fewphoton")

SCHEMA = 1
COMMANDS = ("spectrum", "ep", "boundstate", "g2", "nphoton", "sweep-tightness")
MAX_GRID = 1_000_000
MAX_ORACLE_POINTS = 4096
MAX_SLICE = 250_000
WORKERS_ENV = "FEWPHOTON_MAX_WORKERS"

# per-command option defaults; None means "derived from params"
DEFAULTS = {
    "spectrum": {"n": [1], "kappa_range": None, "omega_range": None},
    "ep": {"n": [1, 2, 3]},
    "boundstate": {"k1": None, "k2": None, "tau_max": None, "points": 512,
                   "method": "residue", "rate_method": "modes"},
    "g2": {"tau_max": None, "points": 2048, "rate_method": "modes"},
    "nphoton": {"n": [3], "gap_range": None, "fixed_gap": None, "k": None},
    "sweep-tightness": {"kappa_range": None, "points": 512, "g2_points": 2048},
}
REQUIRED = {"spectrum": ("kappa_range",), "sweep-tightness": ("kappa_range",)}
PARAM_KEYS = ("omega", "Omega", "g", "kappa")


@dataclass
class RunConfig:
    command: str
    params: SystemParams
    options: dict = field(default_factory=dict)
    format: str = "csv"
    output: Optional[str] = None
    meta: Optional[str] = None
    schema: int = SCHEMA

    def to_dict(self) -> dict:
        return {"schema": self.schema, "command": self.command, "params": self.params.as_dict(),
                "options": dict(self.options), "format": self.format,
                "output": self.output, "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidArgumentError("config must be a JSON object")
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise InvalidArgumentError(f"unsupported config schema {schema!r} (expected {SCHEMA})")
        unknown = set(data) - {"schema", "command", "params", "options", "format", "output", "meta"}
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        command = data.get("command")
        if command not in COMMANDS:
            raise InvalidArgumentError(f"command must be one of {COMMANDS}, got {command!r}")
        params = _resolve_params(data.get("params") or {}, command)
        options = _resolve_options(command, data.get("options") or {})
        fmt = data.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise InvalidArgumentError(f"format must be csv or json, got {fmt!r}")
        return cls(command, params, options, fmt, data.get("output"), data.get("meta"), SCHEMA)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data)


def parse_range(text) -> tuple[float, float, float]:
    """``"a:b:step"`` -> ``(a, b, step)``."""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    try:
        a, b, step = (float(p) for p in parts)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"range must look like a:b:step, got {text!r}") from None
    if not all(math.isfinite(v) for v in (a, b, step)) or step <= 0 or b < a:
        raise InvalidArgumentError(f"range {text!r} needs finite a <= b and step > 0")
    return a, b, step


def range_grid(text) -> np.ndarray:
    """Inclusive grid ``a, a + step, ...`` up to ``b`` (within 1e-9 step)."""
    a, b, step = parse_range(text)
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    if count > MAX_GRID:
        raise InvalidArgumentError(f"range {text!r} has {count} points; the cap is {MAX_GRID}")
    return a + step * np.arange(count)


def _int_list(value) -> list[int]:
    if isinstance(value, str):
        items = [v for v in value.split(",") if v.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    try:
        out = [int(v) for v in items]
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"expected comma-separated integers, got {value!r}") from None
    if not out or any(v < 1 for v in out):
        raise InvalidArgumentError(f"expected positive integers, got {value!r}")
    return out


def _float_list(value) -> list[float]:
    items = value.split(",") if isinstance(value, str) else list(value)
    try:
        return [float(v) for v in items]
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"expected comma-separated numbers, got {value!r}") from None


def _resolve_params(raw: dict, command: str) -> SystemParams:
    unknown = set(raw) - set(PARAM_KEYS)
    if unknown:
        raise InvalidArgumentError(f"unknown params: {sorted(unknown)}")
    Omega = float(raw.get("Omega", 1.0))
    omega = float(raw.get("omega", Omega))
    if "g" not in raw:
        raise InvalidArgumentError("--g is required")
    if "kappa" not in raw and command not in ("spectrum", "sweep-tightness", "ep"):
        raise InvalidArgumentError("--kappa is required")
    return SystemParams(omega, Omega, float(raw["g"]), float(raw.get("kappa", 0.0)))


def _resolve_options(command: str, raw: dict) -> dict:
    defaults = DEFAULTS[command]
    unknown = set(raw) - set(defaults)
    if unknown:
        raise InvalidArgumentError(f"unknown options for {command}: {sorted(unknown)}")
    opts = dict(defaults)
    opts.update({k: v for k, v in raw.items() if v is not None})
    for key in REQUIRED.get(command, ()):
        if opts[key] is None:
            raise InvalidArgumentError(f"--{key.replace('_', '-')} is required for {command}")
    for key in ("kappa_range", "omega_range", "gap_range"):
        if opts.get(key) is not None:
            opts[key] = "{:.15g}:{:.15g}:{:.15g}".format(*parse_range(opts[key]))
    if "n" in opts:
        opts["n"] = _int_list(opts["n"])
    if opts.get("k") is not None:
        opts["k"] = _float_list(opts["k"])
    for key in ("points", "g2_points"):
        if key in opts:
            value = opts[key]
            if isinstance(value, bool) or int(value) != value or not 2 <= int(value) <= MAX_GRID:
                raise InvalidArgumentError(f"{key} must be an integer in [2, {MAX_GRID}]")
            opts[key] = int(value)
    for key in ("k1", "k2", "tau_max", "fixed_gap"):
        if opts.get(key) is not None:
            opts[key] = float(opts[key])
            if key != "k1" and key != "k2" and not opts[key] > 0:
                raise InvalidArgumentError(f"{key} must be positive")
    if command == "boundstate" and opts["method"] not in ("resonant", "residue", "oracle"):
        raise InvalidArgumentError("method must be resonant, residue or oracle")
    if "rate_method" in opts:
        allowed = ("modes", "logslope") if command == "boundstate" else ("modes", "peaks")
        if opts["rate_method"] not in allowed:
            raise InvalidArgumentError(f"rate_method must be one of {allowed}")
    return opts


# --- commands ------------------------------------------------------------

def _natural_tau_max(params: SystemParams) -> float:
    return float(default_tau_grid(params, 2)[-1])


def _cmd_spectrum(cfg: RunConfig):
    opts = cfg.options
    kappa = range_grid(opts["kappa_range"])
    omega = range_grid(opts["omega_range"]) if opts["omega_range"] else None
    size = len(opts["n"]) * kappa.size * (1 if omega is None else omega.size)
    if size > MAX_GRID:
        raise InvalidArgumentError(f"spectrum sweep has {size} rows; the cap is {MAX_GRID}")
    log.info("spectrum: %d rows", size)
    sweep = sweep_spectrum(cfg.params, opts["n"], kappa, omega)
    return sweep.FIELDS, list(sweep.rows()), None


def _cmd_ep(cfg: RunConfig):
    header = ("n", "kappa_ep", "re_E", "im_E", "gap")
    rows = []
    for n in cfg.options["n"]:
        kappa = exceptional_point_kappa(cfg.params, n)
        e_plus, e_minus = eigenvalues(cfg.params.replace(kappa=kappa), n)
        center = 0.5 * (e_plus + e_minus)
        rows.append((n, kappa, center.real, center.imag, abs(e_plus - e_minus)))
    return header, rows, None


def _cmd_boundstate(cfg: RunConfig):
    p, opts = cfg.params, cfg.options
    k1 = p.omega if opts["k1"] is None else opts["k1"]
    k2 = p.omega if opts["k2"] is None else opts["k2"]
    tau_max = opts["tau_max"] or _natural_tau_max(p)
    tau = np.linspace(0.0, tau_max, opts["points"])
    method = opts["method"]
    log.info("boundstate: %s profile, %d points", method, tau.size)
    if method == "resonant":
        if k1 != p.omega or k2 != p.omega:
            raise InvalidArgumentError("the resonant closed form needs k1 = k2 = omega")
        profile = resonant_profile(p, tau)
    elif method == "residue":
        profile = generic_bound_profile(p, k1, k2, tau)
    else:
        if tau.size > MAX_ORACLE_POINTS:
            raise InvalidArgumentError(f"oracle profiles are capped at {MAX_ORACLE_POINTS} points")
        profile = oracle_bound_profile(p, k1, k2, tau)
    meta = profile.metadata()
    try:
        meta["tail_rate"] = tail_decay_rate(profile, opts["rate_method"])
        meta["rate_method"] = opts["rate_method"]
    except FewPhotonError as exc:
        log.warning("tail rate not available: %s", exc)
        meta["tail_rate"] = None
    return export.PROFILE_HEADER, list(export.profile_rows(profile)), meta


def _cmd_g2(cfg: RunConfig):
    p, opts = cfg.params, cfg.options
    tau_max = opts["tau_max"] or _natural_tau_max(p)
    log.info("g2: %d points up to tau = %g", opts["points"], tau_max)
    curve = g2_curve(p, tau_max, opts["points"], opts["rate_method"])
    return export.CORRELATION_HEADER, list(zip(curve.tau_grid, curve.g2)), curve.metadata()


def _cmd_nphoton(cfg: RunConfig):
    p, opts = cfg.params, cfg.options
    if len(opts["n"]) != 1:
        raise InvalidArgumentError("nphoton takes a single --n")
    n = opts["n"][0]
    if n < 2:
        raise InvalidArgumentError("nphoton needs n >= 2")
    fixed = opts["fixed_gap"] or 1.0 / max(p.g, 1e-300)
    gap_grid = range_grid(opts["gap_range"] or f"0:{_natural_tau_max(p):.15g}:{_natural_tau_max(p) / 48:.15g}")
    axes = 1 if n == 2 else 2
    if gap_grid.size ** axes > MAX_SLICE:
        raise InvalidArgumentError(f"slice has {gap_grid.size ** axes} points; the cap is {MAX_SLICE}")
    if opts["k"] is not None and len(opts["k"]) != n:
        raise InvalidArgumentError("--k needs one frequency per photon")
    header = ("gap1", "gap2", "re_value", "im_value", "abs_value")[: 1 if axes == 1 else 2] + \
        ("re_value", "im_value", "abs_value")
    rows = []
    grids = [gap_grid] if axes == 1 else [gap_grid, gap_grid]
    for point in (np.stack(np.meshgrid(*grids, indexing="ij"), -1).reshape(-1, axes)):
        gaps = np.full(n - 1, fixed)
        gaps[:axes] = point
        coords = np.concatenate([[0.0], -np.cumsum(gaps)])
        coords -= coords[-1]
        if opts["k"] is None:
            env = envelope_resonant(p, coords)
        else:
            env = envelope_general(p, opts["k"], coords)
        rows.append(tuple(point) + (env.value.real, env.value.imag, abs(env.value)))
    meta = {"n": n, "fixed_gap": fixed, "params": p.as_dict(),
            "k": opts["k"], "coordinates": "x_n = 0, x_j = x_{j+1} + gap_j"}
    return header, rows, meta


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw == "":
        return max(1, min(4, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InvalidArgumentError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return value


def tightness_row(params: SystemParams, points: int = 512, g2_points: int = 2048):
    """``(κ, κ/g, tail rate of f, approach rate of G²)`` at one resonant point."""
    tau_max = _natural_tau_max(params)
    tail = tail_decay_rate(resonant_profile(params, np.linspace(0.0, tau_max, points)))
    approach = g2_curve(params, tau_max, g2_points).approach_rate
    return params.kappa, params.kappa / params.g, tail, approach


def _cmd_sweep_tightness(cfg: RunConfig):
    p, opts = cfg.params, cfg.options
    kappas = range_grid(opts["kappa_range"])
    if kappas[0] <= 0:
        raise InvalidArgumentError("kappa-range must start above zero")
    workers = worker_count()
    log.info("sweep-tightness: %d kappa values on %d worker(s)", kappas.size, workers)

    def job(kappa):
        return tightness_row(p.replace(kappa=float(kappa)), opts["points"], opts["g2_points"])

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(job, kappas))
    tail = np.array([r[2] for r in results])
    approach = np.array([r[3] for r in results])
    i_tail, i_appr = int(np.argmax(tail)), int(np.argmax(approach))
    rows = [r + (i == i_tail, i == i_appr) for i, r in enumerate(results)]
    header = ("kappa", "kappa_over_g", "tail_rate", "approach_rate", "tail_argmax", "approach_argmax")
    meta = {"params": p.as_dict(), "tail_argmax_kappa": kappas[i_tail],
            "approach_argmax_kappa": kappas[i_appr], "kappa_ep": 4.0 * p.g}
    return header, rows, meta


HANDLERS = {
    "spectrum": _cmd_spectrum, "ep": _cmd_ep, "boundstate": _cmd_boundstate, "g2": _cmd_g2,
    "nphoton": _cmd_nphoton, "sweep-tightness": _cmd_sweep_tightness,
}


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot write {path}: {exc}") from None


def run(cfg: RunConfig) -> int:
    """Execute one command and write its table (and metadata, if any)."""
    header, rows, meta = HANDLERS[cfg.command](cfg)
    _write(cfg.output, export.table_text(header, rows, cfg.format))
    if meta is not None:
        meta_path = cfg.meta or (cfg.output + ".meta.json" if cfg.output not in (None, "-") else None)
        if meta_path is not None:
            _write(meta_path, export.metadata_text(meta))
        else:
            log.info("metadata not written (no --output or --meta)")
    log.info("done: %d rows", len(rows))
    return 0


# --- argument parsing ------------------------------------------------------

def _common_parent() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parent = argparse.ArgumentParser(add_help=False, argument_default=S)
    group = parent.add_argument_group("system parameters")
    group.add_argument("--omega", type=float, help="cavity frequency (default: equal to --Omega)")
    group.add_argument("--Omega", type=float, help="atomic transition frequency (default 1)")
    group.add_argument("--g", type=float, help="atom-cavity coupling")
    group.add_argument("--kappa", type=float, help="cavity-waveguide coupling")
    out = parent.add_argument_group("output")
    out.add_argument("--format", choices=("csv", "json"))
    out.add_argument("--output", "-o", help="output file (default stdout)")
    out.add_argument("--meta", help="metadata JSON path (default <output>.meta.json)")
    out.add_argument("--config", help="JSON config file; flags override its values")
    out.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    out.add_argument("--quiet", "-q", action="store_true", help="no progress on stderr")
    return parent


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parent = _common_parent()
    parser = argparse.ArgumentParser(prog="fewphoton", description=__doc__.split("\n\n")[0],
                                     parents=[parent], allow_abbrev=False,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[parent], allow_abbrev=False,
                              argument_default=S)

    p = add("spectrum", "eigenvalues of the excitation sectors over a kappa (and omega) grid")
    p.add_argument("--n", help="comma-separated sectors, e.g. 1,2,3")
    p.add_argument("--kappa-range", dest="kappa_range", help="a:b:step (inclusive)")
    p.add_argument("--omega-range", dest="omega_range", help="a:b:step (inclusive)")

    p = add("ep", "exceptional-point location and coalesced eigenvalue per sector")
    p.add_argument("--n", help="comma-separated sectors")

    p = add("boundstate", "two-photon bound-state profile b(tau)")
    p.add_argument("--k1", type=float, help="incident frequency (default omega)")
    p.add_argument("--k2", type=float, help="incident frequency (default omega)")
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--method", choices=("resonant", "residue", "oracle"))
    p.add_argument("--rate-method", dest="rate_method", choices=("modes", "logslope"))

    p = add("g2", "resonant second-order correlation G2(tau)")
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--rate-method", dest="rate_method", choices=("modes", "peaks"))

    p = add("nphoton", "slowest-decay N-photon envelope over a slice of photon gaps")
    p.add_argument("--n", help="number of photons")
    p.add_argument("--gap-range", dest="gap_range", help="a:b:step for the swept gaps")
    p.add_argument("--fixed-gap", dest="fixed_gap", type=float, help="value of the other gaps (default 1/g)")
    p.add_argument("--k", help="comma-separated incident frequencies (default: resonant closed form)")

    p = add("sweep-tightness", "tail and G2 approach rates across kappa, argmax flagged")
    p.add_argument("--kappa-range", dest="kappa_range", help="a:b:step (inclusive)")
    p.add_argument("--points", type=int, help="profile samples per kappa")
    p.add_argument("--g2-points", dest="g2_points", type=int, help="G2 samples per kappa")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    data: dict = {}
    if values.get("config"):
        try:
            with open(values["config"], encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InvalidArgumentError("config must be a JSON object")
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in data.items()}
    if values.get("command"):
        if data.get("command") not in (None, values["command"]):
            data["options"] = {}
        data["command"] = values["command"]
    params = data.setdefault("params", {}) or {}
    data["params"] = params
    for key in PARAM_KEYS:
        if key in values:
            params[key] = values[key]
    for key in ("format", "output", "meta"):
        if key in values:
            data[key] = values[key]
    options = data.setdefault("options", {}) or {}
    data["options"] = options
    skip = set(PARAM_KEYS) | {"format", "output", "meta", "config", "dump_config", "quiet", "command"}
    for key, value in values.items():
        if key not in skip:
            options[key] = value
    if not data.get("command"):
        raise InvalidArgumentError("no command given (positional COMMAND or 'command' in --config)")
    return RunConfig.from_dict(data)


def _error(name: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": name, "message": message}) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("fewphoton: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.WARNING if getattr(args, "quiet", False) else logging.INFO)
    log.propagate = False
    try:
        cfg = config_from_args(args)
        if getattr(args, "dump_config", False):
            sys.stdout.write(cfg.to_json())
            return 0
        return run(cfg)
    except FewPhotonError as exc:
        _error(exc.name, str(exc))
        return 2
    except (ValueError, ArithmeticError) as exc:
        _error("numerical-error", str(exc))
        return 2
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    raise SystemExit(main())
