"""Command-line front end: ``simulate``, ``sweep``, ``events`` and ``verify``.

Exit codes: 0 success, 2 invalid configuration, 3 internal consistency
failure, 4 failed audit.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import audit
from .analysis import (DEFAULT_STEPS, DEFAULT_TMAX, ZERO_TOL, detect_events, sweep,
                       zero_condition_check)
from .errors import DomainError, EwlError, ResolutionError
from .measures import concurrence_components, entropy_components
from .solutions import ALL_CORRECTIONS, PRINTED, propagate
from .states import (BellPhi, BellPsi, EwlPhi, EwlPsi, FactorizedMixed, RawX, ReservoirParams,
                     Werner, XState, as_ewl)

EXIT_CONFIG = 2
EXIT_INTERNAL = 3
EXIT_AUDIT = 4

TRAJECTORY_HEADER = ("gamma0_t", "a", "b", "c", "d", "re_w", "im_w", "re_z", "im_z",
                     "concurrence", "entropy", "rho_pp", "rho_mm", "abs_rho_pm")
SWEEP_HEADER = ("axis_name", "axis_value", "gamma0_t", "concurrence")
STATES = ("bell-phi", "bell-psi", "ewl-phi", "ewl-psi", "werner", "factorized-mixed", "raw-x")

DEFAULTS = {
    "state": "ewl-phi", "r": 1.0, "alpha2": 0.5, "theta": 0.0, "theta_pi": None,
    "gamma": 1.0, "omega": 5.0, "tmax": DEFAULT_TMAX, "steps": DEFAULT_STEPS,
    "out": None, "format": None, "zero_tol": ZERO_TOL, "time_unit": "scaled", "x": None,
    "axis": "r", "values": None, "start": 0.0, "stop": 1.0, "count": 11,
}


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits: every double survives a write/read cycle."""
    if x is None:
        return "null"
    x = float(x) + 0.0
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, level: int = 0) -> str:
    """JSON text with floats written by :func:`fmt`."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    return json.dumps(str(obj))


def write_atomic(path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# Configuration


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with the same keys as the flags; flags win")
    p.add_argument("--state", choices=STATES)
    p.add_argument("--r", type=float, help="purity parameter r in [0, 1]")
    p.add_argument("--alpha2", type=float, help="alpha^2 in [0, 1]")
    p.add_argument("--theta", type=float, help="relative phase in radians")
    p.add_argument("--theta-pi", type=float, help="relative phase in units of pi")
    p.add_argument("--x", help="raw-x entries a,b,c,d,re_w,im_w,re_z,im_z")
    p.add_argument("--gamma", type=float, help="Lorentzian width Gamma")
    p.add_argument("--omega", type=float, help="coupling Omega")
    p.add_argument("--tmax", type=float, help="horizon in units of 1/gamma0")
    p.add_argument("--steps", type=int, help="number of time samples (>= 2)")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--zero-tol", type=float, help="concurrence threshold for zero")
    p.add_argument("--time-unit", choices=("scaled", "raw"),
                   help="emit gamma0*t (default) or t in the unit of the rates")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ewldyn", description=(
        "Exact two-qubit dynamics in a common zero-temperature Lorentzian reservoir."))
    sub = p.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="trajectory of one initial state")
    _common(sim)
    sw = sub.add_parser("sweep", help="concurrence over a parameter axis and time")
    _common(sw)
    sw.add_argument("--axis", choices=("r", "alpha2", "theta"))
    sw.add_argument("--values", help="comma-separated axis values")
    sw.add_argument("--start", type=float)
    sw.add_argument("--stop", type=float)
    sw.add_argument("--count", type=int)
    ev = sub.add_parser("events", help="sudden death / birth report")
    _common(ev)
    ver = sub.add_parser("verify", help="audit the encoded solutions")
    ver.add_argument("--config")
    ver.add_argument("--gamma", type=float)
    ver.add_argument("--omega", type=float)
    ver.add_argument("--no-corrections", action="store_true",
                     help="use the expressions as printed (corrections 1, 2, 4 off)")
    ver.add_argument("--transform-corpus", action="store_true",
                     help="also check both inverters on standard transform pairs")
    ver.add_argument("--out")
    ver.add_argument("--format", choices=("text", "json"))
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the optional JSON config and explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for k, v in data.items():
            key = k.replace("-", "_")
            if key not in cfg and key not in ("no_corrections", "transform_corpus"):
                raise ConfigError(f"unknown config key {k!r}")
            cfg[key] = v
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "config"):
            cfg[k] = v
    if cfg.get("theta_pi") is not None:
        cfg["theta"] = float(cfg["theta_pi"]) * math.pi
    return cfg


def params_of(cfg) -> ReservoirParams:
    try:
        return ReservoirParams(float(cfg["gamma"]), float(cfg["omega"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def spec_of(cfg):
    kind = cfg["state"]
    r, a2, th = float(cfg["r"]), float(cfg["alpha2"]), float(cfg["theta"])
    th = th % (2 * math.pi)
    try:
        if kind == "bell-phi":
            return BellPhi(a2, th)
        if kind == "bell-psi":
            return BellPsi(a2, th)
        if kind == "ewl-phi":
            return EwlPhi(r, a2, th)
        if kind == "ewl-psi":
            return EwlPsi(r, a2, th)
        if kind == "werner":
            return Werner(r)
        if kind == "factorized-mixed":
            return FactorizedMixed(a2)
        if kind == "raw-x":
            if cfg.get("x") is None:
                raise ConfigError("raw-x needs --x a,b,c,d,re_w,im_w,re_z,im_z")
            vals = cfg["x"]
            if isinstance(vals, str):
                vals = [float(v) for v in vals.split(",")]
            if len(vals) != 8:
                raise ConfigError("--x needs exactly 8 numbers")
            return RawX(XState.from_vector(np.asarray(vals, dtype=float)))
    except (DomainError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown state {kind!r}")


def times_of(cfg) -> np.ndarray:
    tmax, steps = float(cfg["tmax"]), int(cfg["steps"])
    if not tmax > 0:
        raise ConfigError(f"tmax must be positive, got {tmax!r}")
    if steps < 2:
        raise ConfigError(f"steps must be >= 2, got {steps!r}")
    return np.linspace(0.0, tmax, steps)


def _time_column(cfg, params, times):
    if cfg["time_unit"] == "raw":
        return "t", times / params.gamma0
    return "gamma0_t", times


# --------------------------------------------------------------------------
# Commands


def trajectory_table(traj):
    a, b, c, d, w, z = traj.components()
    conc = concurrence_components(a, b, c, d, w, z)
    ent = entropy_components(a, b, c, d, w, z)
    pp = 0.5 * (b + c) + z.real
    mm = 0.5 * (b + c) - z.real
    pm = np.hypot(0.5 * (b - c), z.imag)
    return np.column_stack([traj.times, a, b, c, d, w.real, w.imag, z.real, z.imag,
                            conc, ent, pp, mm, pm])


def cmd_simulate(cfg) -> str:
    params = params_of(cfg)
    spec = spec_of(cfg)
    traj = propagate(spec, params, times_of(cfg))
    table = trajectory_table(traj)
    tname, tcol = _time_column(cfg, params, traj.times)
    table[:, 0] = tcol
    header = (tname,) + TRAJECTORY_HEADER[1:]
    if (cfg["format"] or "csv") == "json":
        return to_json({"columns": list(header), "rows": table.tolist()}) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in table:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _axis_values(cfg) -> np.ndarray:
    if cfg.get("values") is not None:
        vals = cfg["values"]
        if isinstance(vals, str):
            vals = [float(v) for v in vals.split(",") if v.strip()]
        return np.asarray(vals, dtype=float)
    count = int(cfg["count"])
    if count < 1:
        raise ConfigError("count must be >= 1")
    return np.linspace(float(cfg["start"]), float(cfg["stop"]), count)


def cmd_sweep(cfg) -> str:
    params = params_of(cfg)
    template = spec_of(cfg)
    axis = cfg["axis"]
    values = _axis_values(cfg)
    try:
        grid = sweep(template, axis, values, params, times_of(cfg))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    tname, tcol = _time_column(cfg, params, grid.times)
    header = ("axis_name", "axis_value", tname, "concurrence")
    if (cfg["format"] or "csv") == "json":
        return to_json({"axis_name": axis, "axis_values": grid.axis_values.tolist(),
                        tname: tcol.tolist(), "concurrence": grid.concurrence.tolist()}) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for i, v in enumerate(grid.axis_values):
        for j in range(len(grid.times)):
            buf.write(f"{axis},{fmt(v)},{fmt(tcol[j])},{fmt(grid.concurrence[i, j])}\n")
    return buf.getvalue()


def _single_excitation_family(spec) -> bool:
    ewl = as_ewl(spec)
    return isinstance(ewl, EwlPhi) and ewl.r == 1.0


def cmd_events(cfg) -> str:
    if (cfg["format"] or "json") != "json":
        raise ConfigError("the events report is JSON only")
    params = params_of(cfg)
    spec = spec_of(cfg)
    zero_tol = float(cfg["zero_tol"])
    traj = propagate(spec, params, times_of(cfg))
    try:
        ev = detect_events(traj, zero_tol)
    except ResolutionError as exc:
        raise ConfigError(f"{exc} (increase --steps)") from exc
    report = ev.as_dict()
    notes = list(report["notes"])
    if _single_excitation_family(spec) and ev.dark_periods:
        zc = zero_condition_check(traj, zero_tol)
        for rec in zc.zeros:
            notes.append(
                f"isolated zero at gamma0_t={fmt(rec.time)}: |rho_pp-rho_mm|={rec.pp_minus_mm:.3g}, "
                f"|rho_pp-|rho_pm||={rec.pp_minus_abs_pm:.3g}, state (1-k)|00><00| + k{rec.variant}"
                f"<{rec.variant[1:-1]}| with k={rec.k:.6g}")
    if cfg["time_unit"] == "raw":
        g0 = params.gamma0
        report["dark_periods"] = [[a / g0, b / g0] for a, b in report["dark_periods"]]
        if report["birth_time"] is not None:
            report["birth_time"] /= g0
        notes.append("times are in the unit of the reservoir rates, not gamma0*t")
    report["notes"] = notes
    return to_json(report) + "\n"


def cmd_verify(cfg) -> tuple[str, bool]:
    params = params_of(cfg)
    corrections = PRINTED if cfg.get("no_corrections") else ALL_CORRECTIONS
    results = audit.run_audits(params, corrections)
    if cfg.get("transform_corpus"):
        results += audit.corpus_audit()
    ok = all(r.passed for r in results)
    lines = audit.corrections_report(corrections)
    if (cfg.get("format") or "text") == "json":
        text = to_json({
            "passed": ok,
            "corrections": lines,
            "audits": [{"name": r.name, "passed": r.passed, "value": r.value, "tol": r.tol,
                        "detail": r.detail} for r in results],
        }) + "\n"
    else:
        text = "\n".join(lines + [r.line() for r in results]
                         + [f"{'ALL AUDITS PASSED' if ok else 'AUDIT FAILURES'}"]) + "\n"
    return text, ok


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "verify":
            text, ok = cmd_verify(cfg)
            write_atomic(cfg.get("out"), text)
            return 0 if ok else EXIT_AUDIT
        run = {"simulate": cmd_simulate, "sweep": cmd_sweep, "events": cmd_events}[args.command]
        write_atomic(cfg.get("out"), run(cfg))
        return 0
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EwlError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
