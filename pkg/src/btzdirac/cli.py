"""
Command-line interface.

    btzdirac geometry      --M 1 --J 0 --l 1 --r-min-offset 0.1 --r-max 3 --points 5
    btzdirac potentials    --M 1 --J 1 --l 2 --mu 1 --k 1 [--field kg] [--hbar 0]
    btzdirac scan-crossing --M 1 --J 1 --l 1 --mu 1 --k 1 --format json
    btzdirac classify      --M 1 --J 0 --l 1 --mu 0.3 --k 1
    btzdirac integrate     --M 1 --J 0 --l 1 --mu 1 --k 1 --r-start 10 --r-end 1.5
    btzdirac verify        --M 1 --J 0.5 --l 1 --mu 1 --k 1

Parameters can also come from a ``--config`` file of ``key=value`` lines
(``#`` starts a comment); flags override the file. ``--sweep
field=start:stop:count`` (repeatable) runs the command on the Cartesian
product of linearly spaced values and writes one file per tuple,
``<stem>_NNNN<ext>``, next to ``--out``.

Exit codes: 0 success, 2 invalid input (bad flags, parameters outside a
routine's domain), 3 numerical failure (integration stalled, bracketing
failed, ...), 1 for anything unexpected.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from . import spectral
from .dirac_radial import IntegrationOptions, ModeParams, integrate_radial, potential_eigenvalues_hbar
from .errors import BTZError, InvalidParameters, NumericalError, ValidationError
from .geometry import BTZParams, angular_shift, lapse_sq_exterior, tortoise
from .klein_gordon import kg_eigenvalues
from .level_crossing import (
    GridOptions,
    crossing_bounds,
    extremal_touch_point,
    kg_verify_no_crossing,
    phi_plus,
    verify_no_crossing,
)
from .serialization import Report, encode, write_atomic

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

COMMANDS = ("geometry", "potentials", "scan-crossing", "classify", "integrate", "verify")

# option dest -> (type, default); None defaults mean "required" or "derived"
OPTIONS: Dict[str, Any] = {
    "M": (float, None),
    "J": (float, None),
    "l": (float, None),
    "mu": (float, None),
    "k": (float, None),
    "lam": (float, 0.0),
    "hbar": (float, 1.0),
    "r_min_offset": (float, 1e-8),
    "r_max": (float, None),
    "points": (int, 1000),
    "log_grid": (bool, True),
    "ladder_rungs": (int, None),
    "tol": (float, 1e-10),
    "format": (str, "csv"),
    "out": (str, None),
    "field": (str, "dirac"),
    "r_start": (float, None),
    "r_end": (float, None),
    "g1": (float, 1.0),
    "g2": (float, 0.0),
    "r0": (float, None),
}
SWEEPABLE = tuple(k for k, (t, _) in OPTIONS.items() if t in (float, int))
ALIASES = {"lambda": "lam"}


class UsageError(ValidationError):
    """Bad command-line or config-file input."""


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def _dest(key: str) -> str:
    key = key.strip().replace("-", "_")
    return ALIASES.get(key, key)


def _convert(dest: str, text: str):
    kind = OPTIONS[dest][0]
    try:
        if kind is bool:
            return _bool(text)
        if kind is int:
            value = float(text)
            if not value.is_integer():
                raise ValueError
            return int(value)
        return kind(text)
    except ValueError:
        raise UsageError(f"bad value for {dest}: {text!r}") from None


def read_config(path: str) -> Dict[str, Any]:
    """Parse a key=value file. Keys are option names (dashes or underscores)."""
    values: Dict[str, Any] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, text = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{number}: expected key=value")
        dest = _dest(key)
        if dest not in OPTIONS:
            raise UsageError(f"{path}:{number}: unknown key {key.strip()!r}")
        values[dest] = _convert(dest, text.strip())
    return values


def parse_sweep(text: str):
    """'field=start:stop:count' -> (dest, values)."""
    key, sep, rng = text.partition("=")
    dest = _dest(key)
    parts = rng.split(":")
    if not sep or len(parts) != 3:
        raise UsageError(f"sweep must look like field=start:stop:count, got {text!r}")
    if dest not in SWEEPABLE:
        raise UsageError(f"cannot sweep {key!r}; sweepable: {', '.join(SWEEPABLE)}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad sweep range in {text!r}") from None
    if count < 1:
        raise UsageError("sweep count must be >= 1")
    values = np.linspace(start, stop, count)
    if OPTIONS[dest][0] is int:
        if not np.all(values == np.round(values)):
            raise UsageError(f"sweep of {dest} must hit integers")
        return dest, [int(v) for v in values]
    return dest, [float(v) for v in values]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("background and mode")
    g.add_argument("--M", type=float, help="mass parameter")
    g.add_argument("--J", type=float, help="angular momentum")
    g.add_argument("--l", type=float, help="AdS radius")
    g.add_argument("--mu", type=float, help="field mass")
    g.add_argument("--k", type=float, help="angular quantum number (integer)")
    g.add_argument("--lambda", dest="lam", type=float, help="spectral parameter (default 0)")
    g.add_argument("--hbar", type=float, help="spin-coupling scale for Dirac potentials (default 1)")
    g = common.add_argument_group("grid, ladders, tolerances")
    g.add_argument("--r-min-offset", type=float, help="inner grid point r_+(1 + offset) (default 1e-8)")
    g.add_argument("--r-max", type=float, help="outer grid point (default 1e3 r_+)")
    g.add_argument("--points", type=int, help="grid points / output samples (default 1000)")
    g.add_argument("--log-grid", action=argparse.BooleanOptionalAction, default=None,
                   help="logarithmic spacing in r - r_+ (default on)")
    g.add_argument("--ladder-rungs", type=int, help="rungs for integrability ladders")
    g.add_argument("--tol", type=float, help="relative tolerance for ODE integration (default 1e-10)")
    g.add_argument("--r0", type=float, help="inner radius for infinity-side checks (default 2 r_+)")
    g = common.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--out", help="output file (default standard output)")
    g.add_argument("--config", help="key=value file supplying defaults")
    g.add_argument("--sweep", action="append", default=[], metavar="FIELD=START:STOP:COUNT",
                   help="sweep a numeric field; repeatable")

    parser = argparse.ArgumentParser(prog="btzdirac", description="Dirac fields on BTZ black holes.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("geometry", parents=[common], help="table of r, N^2, N_phi, y")
    for name, text in (("potentials", "table of lambda+/-, G+/-, phi_+"),
                       ("scan-crossing", "level-crossing scan")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--field", choices=("dirac", "kg"), help="field equation (default dirac)")
    sub.add_parser("classify", parents=[common], help="limit-point / limit-circle at both ends")
    sp = sub.add_parser("integrate", parents=[common], help="integrate the radial system")
    sp.add_argument("--r-start", type=float, help="initial radius")
    sp.add_argument("--r-end", type=float, help="final radius")
    sp.add_argument("--g1", type=float, help="initial g1 (default 1)")
    sp.add_argument("--g2", type=float, help="initial g2 (default 0)")
    sub.add_parser("verify", parents=[common], help="near-horizon and infinity premise checks")
    return parser


def resolve(args: argparse.Namespace) -> Dict[str, Any]:
    """Merge built-in defaults < config file < flags."""
    cfg = {dest: default for dest, (_, default) in OPTIONS.items()}
    if args.config:
        cfg.update(read_config(args.config))
    for dest in OPTIONS:
        value = getattr(args, dest, None)
        if value is not None:
            cfg[dest] = value
    for dest, allowed in (("format", ("csv", "json")), ("field", ("dirac", "kg"))):
        if cfg[dest] not in allowed:
            raise UsageError(f"{dest} must be one of {', '.join(allowed)}, got {cfg[dest]!r}")
    cfg["command"] = args.command
    return cfg


# ---------------------------------------------------------------------------
# Config -> domain objects
# ---------------------------------------------------------------------------

def _require(cfg, *names):
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _background(cfg) -> BTZParams:
    _require(cfg, "M", "J", "l")
    return BTZParams(cfg["M"], cfg["J"], cfg["l"])


def _mode(cfg) -> ModeParams:
    _require(cfg, "mu", "k")
    return ModeParams(cfg["mu"], cfg["k"], cfg["lam"], cfg["hbar"])


def _grid(cfg) -> GridOptions:
    return GridOptions(cfg["points"], cfg["r_min_offset"], cfg["r_max"], cfg["log_grid"])


def _rungs(cfg, default):
    rungs = cfg["ladder_rungs"]
    return default if rungs is None else rungs


def _background_params(p: BTZParams) -> Dict[str, Any]:
    h = p.horizons
    return {
        "M": p.M, "J": p.J, "l": p.l,
        "r_plus": h.r_plus, "r_minus": h.r_minus,
        "extremal": h.extremal, "tortoise_branch": h.branch,
    }


def _mode_params(m: ModeParams) -> Dict[str, Any]:
    return {"mu": m.mu, "k": m.k, "lambda": m.lam, "hbar": m.hbar}


def _grid_params(cfg, p: BTZParams) -> Dict[str, Any]:
    return {
        "r_min_offset": cfg["r_min_offset"], "r_max": _grid(cfg).outer_radius(p),
        "points": cfg["points"], "log_grid": cfg["log_grid"],
    }


def _ladder_summary(rep: spectral.IntegrabilityReport) -> Dict[str, Any]:
    out = {"verdict": rep.verdict, "value": rep.value, "growth_exponent": rep.growth_exponent,
           "rungs": int(rep.points.size)}
    out.update(rep.extras)
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_geometry(cfg) -> Report:
    p = _background(cfg)
    r = p.r_plus + _grid(cfg).offsets(p)
    rows = np.column_stack([r, lapse_sq_exterior(p, r), angular_shift(p, r), tortoise(p, r)])
    params = {**_background_params(p), **_grid_params(cfg, p)}
    return Report("geometry", params, {}, ["r", "N2", "N_phi", "y"], rows)


def cmd_potentials(cfg) -> Report:
    p, m = _background(cfg), _mode(cfg)
    r = p.r_plus + _grid(cfg).offsets(p)
    if cfg["field"] == "kg":
        lam_minus, lam_plus = kg_eigenvalues(p, m, r)
    else:
        lam_minus, lam_plus = potential_eigenvalues_hbar(p, m, r)
    if m.k == 0:
        g_minus = g_plus = np.full_like(r, np.nan)
    else:
        g_minus, g_plus = crossing_bounds(p, m, r)
    phi = np.full_like(r, phi_plus(p, m.k))
    rows = np.column_stack([r, lam_minus, lam_plus, g_minus, g_plus, phi])
    params = {**_background_params(p), **_mode_params(m), "field": cfg["field"], **_grid_params(cfg, p)}
    columns = ["r", "lambda_minus", "lambda_plus", "G_minus", "G_plus", "phi_plus"]
    return Report("potentials", params, {}, columns, rows)


def cmd_scan_crossing(cfg) -> Report:
    p, m = _background(cfg), _mode(cfg)
    scan = kg_verify_no_crossing if cfg["field"] == "kg" else verify_no_crossing
    rep = scan(p, m, _grid(cfg))
    results: Dict[str, Any] = {
        "verdict": rep.verdict,
        "phi_plus": rep.phi_plus,
        "min_upper_margin": rep.min_upper_margin,
        "max_lower_margin": rep.max_lower_margin,
        "bound_violations": rep.bound_violations,
        "bound_constant": rep.extras["bound_constant"],
        "regime_note": rep.regime_note,
    }
    if p.extremal:
        touch = extremal_touch_point(p, m)
        results["touch_point"] = {
            "r_star": touch.r_star, "inside_domain": touch.inside_domain, "note": touch.regime_note,
        }
    params = {**_background_params(p), **_mode_params(m), "field": rep.field_name, **_grid_params(cfg, p)}
    columns = ["r", "lambda_minus", "G_minus", "phi_plus", "G_plus", "lambda_plus"]
    return Report("scan-crossing", params, results, columns, rep.rows())


def _classification(c: spectral.EndpointClassification) -> Dict[str, Any]:
    out: Dict[str, Any] = {"verdict": c.verdict, "exponents": list(c.exponents),
                           "integer_gap": c.integer_gap, "notes": c.notes}
    for name, rep in c.evidence.items():
        out[name] = _ladder_summary(rep)
    return out


def _r0(cfg, p):
    r0 = 2.0 * p.r_plus if cfg["r0"] is None else cfg["r0"]
    if not r0 > p.r_plus:
        raise InvalidParameters(f"r0={r0!r} must exceed r_+ = {p.r_plus!r}")
    return r0


def cmd_classify(cfg) -> Report:
    p, m = _background(cfg), _mode(cfg)
    r0 = _r0(cfg, p)
    results: Dict[str, Any] = {
        "horizon": _classification(spectral.classify_horizon(p, _rungs(cfg, spectral.DEFAULT_RUNGS))),
        "infinity": _classification(spectral.classify_infinity(m, p, start=r0)),
    }
    if m.mu > 0:
        e = spectral.lpc_E_criterion(p, m, r0, _rungs(cfg, spectral.DEFAULT_RUNGS))
        results["infinity"]["e_criterion"] = _ladder_summary(e)
    else:
        results["infinity"]["e_criterion"] = {"status": "needs mu > 0"}
    params = {**_background_params(p), **_mode_params(m), "r0": r0}
    return Report("classify", params, results)


def cmd_integrate(cfg) -> Report:
    p, m = _background(cfg), _mode(cfg)
    _require(cfg, "r_start", "r_end")
    opts = IntegrationOptions(rtol=cfg["tol"], horizon_offset=cfg["r_min_offset"], samples=cfg["points"])
    tr = integrate_radial(p, m, cfg["r_start"], cfg["r_end"], (cfg["g1"], cfg["g2"]), opts)
    rows = np.column_stack([tr.points, tr.states, tr.companion, tr.wronskian])
    results = {
        "reach": tr.reach,
        "horizon_clamped": tr.horizon_clamped,
        "wronskian_variation": tr.wronskian_variation(),
    }
    params = {
        **_background_params(p), **_mode_params(m),
        "r_start": cfg["r_start"], "r_end": cfg["r_end"], "g1": cfg["g1"], "g2": cfg["g2"],
        "tol": cfg["tol"], "r_min_offset": cfg["r_min_offset"], "points": cfg["points"],
    }
    return Report("integrate", params, results, ["r", "g1", "g2", "h1", "h2", "wronskian"], rows)


def cmd_verify(cfg) -> Report:
    p, m = _background(cfg), _mode(cfg)
    r0 = _r0(cfg, p)
    rungs_inf = _rungs(cfg, spectral.DEFAULT_RUNGS)
    rungs_hor = _rungs(cfg, spectral.HORIZON_RUNGS)
    results: Dict[str, Any] = {}
    if p.extremal:
        results["p2_integrability"] = {"status": "extremal-unsupported"}
        results["levinson"] = {"status": "extremal-unsupported"}
    else:
        p2 = spectral.p2_integrability_check(p, m, rungs_hor)
        results["p2_integrability"] = {"status": "ok", **_ladder_summary(p2)}
        lev = spectral.levinson_check(p, m, rungs=rungs_hor, rtol=min(cfg["tol"], 1e-11))
        results["levinson"] = {
            "status": "ok",
            "phi_plus": lev.phi_plus,
            "entries": [[rep.verdict for rep in row] for row in lev.entry_reports],
            "entries_integrable": lev.entries_integrable,
            "drift": list(lev.drift),
            "plateaued": lev.plateaued,
            "limit_wronskian": lev.wronskian,
            "normalizable": lev.normalizable,
        }
    if m.mu > 0:
        disc = spectral.discreteness_criterion(p, m, r0, rungs_inf)
        results["discreteness"] = {
            "status": "ok", **_ladder_summary(disc),
            "ratio_at_1e6_r0": spectral.discreteness_ratio(p, m, r0, 1e6 * r0),
        }
        e = spectral.lpc_E_criterion(p, m, r0, rungs_inf)
        results["e_criterion"] = {"status": "ok", **_ladder_summary(e)}
    else:
        results["discreteness"] = {"status": "needs mu > 0"}
        results["e_criterion"] = {"status": "needs mu > 0"}
    results["infinity_verdict"] = spectral.classify_infinity(m, p, start=r0).verdict
    params = {**_background_params(p), **_mode_params(m), "r0": r0, "tol": cfg["tol"]}
    return Report("verify", params, results)


DISPATCH = {
    "geometry": cmd_geometry,
    "potentials": cmd_potentials,
    "scan-crossing": cmd_scan_crossing,
    "classify": cmd_classify,
    "integrate": cmd_integrate,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def run(cfg: Dict[str, Any]) -> str:
    """Execute one configuration and return the encoded report."""
    return encode(DISPATCH[cfg["command"]](cfg), cfg["format"])


def _sweep_configs(cfg, sweeps: List[str]):
    parsed = [parse_sweep(s) for s in sweeps]
    names = [d for d, _ in parsed]
    if len(set(names)) != len(names):
        raise UsageError("each field may be swept only once")
    for combo in itertools.product(*(values for _, values in parsed)):
        yield {**cfg, **dict(zip(names, combo))}


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve(args)
        if args.sweep:
            if cfg["out"] is None:
                raise UsageError("--sweep needs --out to name the output files")
            stem, ext = os.path.splitext(cfg["out"])
            for i, tuple_cfg in enumerate(_sweep_configs(cfg, args.sweep)):
                write_atomic(f"{stem}_{i:04d}{ext}", run(tuple_cfg))
        else:
            _emit(run(cfg), cfg["out"])
    except ValidationError as exc:
        print(f"btzdirac: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, BTZError) as exc:
        print(f"btzdirac: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"btzdirac: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - last line of defence for the CLI
        print(f"btzdirac: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
