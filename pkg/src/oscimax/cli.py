"""Command-line entry point: ``oscimax <subcommand> [flags]``.

Every subcommand writes CSV (``--out``, default stdout) and, when writing to
a file, a sibling ``<out>.manifest.json``.  Exit codes: 0 success,
2 validation or usage error, 3 numeric budget exhausted.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import _backend
from .errors import NumericBudgetError, OscimaxError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

SCENARIO_NAMES = {
    "tangential-row1": "TangentialRow1",
    "tangential-row2": "TangentialRow2",
    "tangential-row3": "TangentialRow3",
    "exp-tangential": "ExpTangential",
    "fractal-lines-1d": "FractalLines1D",
    "fractal-lines-2d-low": "FractalLines2D_Low",
    "fractal-lines-2d-high": "FractalLines2D_High",
    "alpha-fractal-remark": "AlphaFractalRemark",
    "sufficiency-probe": "SufficiencyProbe",
}

# flags that must be present after merging --config
REQUIRED = {
    "propagate": ("profile", "m", "x", "t"),
    "maximal": ("profile", "m", "path", "q"),
    "scaling": ("scenario", "k_min", "k_max"),
    "cantor-dim": ("r", "k_max"),
    "vdc": ("phase", "lambda_min", "lambda_max"),
    "kernel": (),
    "ineq": ("mode",),
    "sufficiency": (),
}


class UsageError(ValidationError):
    pass


def _tool_version() -> str:
    try:
        return version("oscimax")
    except PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


def _g(v: float) -> str:
    return format(float(v), ".17g")


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _alpha_arg(text):
    if text is None or str(text).lower() in ("none", "lebesgue", "1", "1.0"):
        return None
    return float(text)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oscimax", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for compiled kernels (env OSCIMAX_THREADS)")
    p.add_argument("--version", action="version", version=f"oscimax {_tool_version()}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None, help="CSV path (default stdout)")
        sp.add_argument("--config", default=None, help="JSON parameters or a run manifest")
        sp.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    sp = sub.add_parser("propagate", help="evaluate S_t^m f at points")
    sp.add_argument("--profile", help="profile JSON file or inline JSON")
    sp.add_argument("--m", type=float)
    sp.add_argument("--x", help="comma-separated positions (2D: x1;x2 pairs)")
    sp.add_argument("--t", help="comma-separated times (one value broadcasts)")
    sp.add_argument("--method", default="auto", choices=("auto", "panel", "fresnel"))
    sp.add_argument("--rel-tol", type=float, default=1e-10)
    common(sp)

    sp = sub.add_parser("maximal", help="grid sup in time and the mixed norm")
    sp.add_argument("--profile")
    sp.add_argument("--m", type=float)
    sp.add_argument("--path", help="vertical | power:KAPPA | exp | line:point:THETA | "
                                   "line:interval:A:B[:N] | line:cantor:R:K")
    sp.add_argument("--q", type=float)
    sp.add_argument("--alpha", default="none")
    sp.add_argument("--x-min", type=float, default=0.0)
    sp.add_argument("--x-max", type=float, default=1.0)
    sp.add_argument("--x-nodes", type=int, default=32)
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, default=1.0)
    sp.add_argument("--coarse-size", type=int, default=64)
    sp.add_argument("--refine-levels", type=int, default=2)
    sp.add_argument("--refine-factor", type=int, default=8)
    common(sp)

    for name in ("scaling", "sufficiency"):
        sp = sub.add_parser(name, help="run a lambda ladder and fit the exponent" if name == "scaling"
                            else "sufficiency probe ladder (scaling --scenario sufficiency-probe)")
        if name == "scaling":
            sp.add_argument("--scenario", help=" | ".join(SCENARIO_NAMES))
        sp.add_argument("--m", type=float, default=2.0)
        sp.add_argument("--q", type=float, default=4.0)
        sp.add_argument("--alpha", type=float, default=1.0)
        sp.add_argument("--s", type=float, default=0.0)
        sp.add_argument("--r", type=float, default=0.2)
        sp.add_argument("--kappa", type=float, default=1.0)
        sp.add_argument("--c", type=float, default=0.125)
        sp.add_argument("--theta", default="cantor", choices=("cantor", "point", "interval"))
        sp.add_argument("--k-min", type=int, default=6 if name == "sufficiency" else None,
                        help="first rung: Cantor generation, or log2(lambda) otherwise")
        sp.add_argument("--k-max", type=int, default=12 if name == "sufficiency" else None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--n-profiles", type=int, default=20)
        sp.add_argument("--epsilon", type=float, default=1.0)
        common(sp)

    sp = sub.add_parser("cantor-dim", help="box-counting dimension of a Cantor set")
    sp.add_argument("--r", type=float)
    sp.add_argument("--k-max", type=int)
    common(sp)

    sp = sub.add_parser("vdc", help="van der Corput decay fit")
    sp.add_argument("--phase", help="quadratic | monotone_linearized | fractional")
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--lambda-max", type=float)
    sp.add_argument("--points", type=int, default=13)
    sp.add_argument("--m", type=float, default=1.5, help="order of the fractional phase")
    common(sp)

    sp = sub.add_parser("kernel", help="kernel bound and stability sweep")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--q", type=float, default=4.0)
    sp.add_argument("--m", type=float, default=2.0)
    sp.add_argument("--samples", type=int, default=64, help="pairs per lambda (half V2, half V3)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lambda-exp-min", type=int, default=8)
    sp.add_argument("--lambda-exp-max", type=int, default=14)
    common(sp)

    sp = sub.add_parser("ineq", help="Young / HLS ratio sweep")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--q", type=float, default=2.0)
    sp.add_argument("--mode", choices=("young", "hls"))
    sp.add_argument("--rho", type=float, default=0.4)
    sp.add_argument("--a", type=float, default=-0.5)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--resolutions", default="256,512,1024")
    common(sp)
    return p


def _load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("--config must hold a JSON object")
    if isinstance(cfg.get("params"), dict):
        cfg = cfg["params"]
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse_args(argv):
    """Parse ``argv``, merging ``--config`` below explicit flags."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _load_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        cfg = {k: v for k, v in cfg.items() if k in known and k not in ("config", "out", "help")}
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    missing = [k for k in REQUIRED[args.command] if getattr(args, k, None) is None]
    if missing:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.print_usage(sys.stderr)
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"missing required flag(s): {flags}")
    return args


# ---------------------------------------------------------------------------
# output

def _params_of(args) -> dict:
    skip = {"command", "out", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, lines: list[str], results: dict, started: str) -> None:
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    params = _params_of(args)
    manifest = {
        "tool_version": _tool_version(),
        "subcommand": args.command,
        "params": params,
        "seed": params.get("seed"),
        "backend": _backend.BACKEND,
        "started": started,
        "finished": _now(),
        "outputs": [os.path.abspath(args.out)],
    }
    manifest.update(results)
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------------------
# subcommands

def _read_profile(text: str):
    from .spectral import profile_from_json

    text = str(text)
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return profile_from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read profile: {exc}") from exc


def _positions(text: str, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array(_floats(text))
    pts = [tuple(float(v) for v in item.split(";")) for item in str(text).split(",") if item]
    if any(len(p) != 2 for p in pts):
        raise UsageError("2D positions are written x1;x2,x1;x2,...")
    return np.array(pts)


def cmd_propagate(args):
    from .propagator import evaluate_many

    prof = _read_profile(args.profile)
    x = _positions(args.x, prof.dimension)
    t = np.array(_floats(args.t))
    n = x.shape[0]
    if t.size == 1:
        t = np.full(n, t[0])
    if t.size != n:
        raise UsageError("--t needs one value or one per position")
    vals = evaluate_many(prof, args.m, x, t, rel_tol=args.rel_tol, method=args.method)
    head = "x,t,re,im,abs" if prof.dimension == 1 else "x1,x2,t,re,im,abs"
    lines = [head]
    for xi, ti, v in zip(x, t, vals):
        pos = ",".join(_g(c) for c in np.atleast_1d(xi))
        lines.append(f"{pos},{_g(ti)},{_g(v.real)},{_g(v.imag)},{_g(abs(v))}")
    return lines, {}


def parse_path(text: str):
    """Path from ``vertical``, ``power:K``, ``exp`` or ``line:...`` strings."""
    from .geometry import (CantorDirections, ExpTangential, Interval, LineField, PowerCurve,
                           Singleton, Vertical)

    parts = str(text).split(":")
    try:
        kind = parts[0]
        if kind == "vertical":
            return Vertical()
        if kind == "power":
            return PowerCurve(float(parts[1]))
        if kind == "exp":
            return ExpTangential()
        if kind == "line":
            sub = parts[1]
            if sub == "point":
                return LineField(Singleton(float(parts[2]) if len(parts) > 2 else 0.0))
            if sub == "interval":
                n = int(parts[4]) if len(parts) > 4 else 17
                return LineField(Interval(float(parts[2]), float(parts[3]), n))
            if sub == "cantor":
                return LineField(CantorDirections(float(parts[2]), int(parts[3])))
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad --path {text!r}: {exc}") from exc
    raise UsageError(f"bad --path {text!r}")


def cmd_maximal(args):
    from .geometry import AlphaMeasure
    from .maximal import MixedNormSpec, TGrid, XInterval, maximal_values, power_mean, x_rule

    prof = _read_profile(args.profile)
    if prof.dimension != 1:
        raise UsageError("the maximal subcommand handles 1D profiles")
    alpha = _alpha_arg(args.alpha)
    spec = MixedNormSpec(
        q=args.q, x_domain=XInterval(args.x_min, args.x_max), t_window=(args.t_min, args.t_max),
        measure=None if alpha is None else AlphaMeasure(alpha), x_nodes=args.x_nodes,
        t_grid=TGrid(args.coarse_size, args.refine_levels, args.refine_factor),
    )
    path = parse_path(args.path)
    xs, ws = x_rule(spec)
    vals, t_best, th_best = maximal_values(prof, args.m, path, xs, spec)
    norm = power_mean(vals, ws, spec.q)
    lines = ["x,weight,sup,t_best,theta_best"]
    for i in range(xs.size):
        th = "" if th_best is None else _g(th_best[i])
        lines.append(f"{_g(xs[i])},{_g(ws[i])},{_g(vals[i])},{_g(t_best[i])},{th}")
    return lines, {"mixed_norm": norm}


def _scenario_id(name: str) -> str:
    from .scenarios import SCENARIOS

    if name in SCENARIO_NAMES:
        return SCENARIO_NAMES[name]
    if name in SCENARIOS:
        return name
    raise UsageError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")


def cmd_scaling(args):
    from .scenarios import CANTOR_SCENARIOS, ScenarioParams, run_scaling

    sid = _scenario_id(getattr(args, "scenario", None) or "sufficiency-probe")
    params = ScenarioParams(
        m=args.m, kappa=args.kappa, q=args.q, alpha=args.alpha, s=args.s, r=args.r, c=args.c,
        theta=args.theta, seed=args.seed, n_profiles=args.n_profiles, epsilon=args.epsilon,
    )
    if args.k_max < args.k_min:
        raise UsageError("--k-max must be >= --k-min")
    ks = list(range(args.k_min, args.k_max + 1))
    ladder = ks if sid in CANTOR_SCENARIOS else [2.0 ** k for k in ks]
    rep = run_scaling(sid, params, ladder)
    results = {
        "scenario": sid,
        "fitted_slope": rep.fitted_slope,
        "stderr": rep.stderr,
        "theoretical_slope": rep.theoretical_slope,
        "norm_slope": rep.norm_slope,
    }
    return rep.csv_lines(), results


def cmd_cantor_dim(args):
    from .geometry import box_counts, minkowski_dim_estimate

    j, delta, counts = box_counts(args.r, args.k_max)
    slope = minkowski_dim_estimate(args.r, args.k_max)
    lines = ["j,delta,N_delta,slope"]
    for a, b, c in zip(j, delta, counts):
        lines.append(f"{a},{_g(b)},{c},{_g(slope)}")
    return lines, {"slope": slope, "exact": math.log(2.0) / math.log(1.0 / args.r)}


def cmd_vdc(args):
    from .kernelcheck import vdc_decay_fit

    if not 0 < args.lambda_min < args.lambda_max:
        raise UsageError("need 0 < --lambda-min < --lambda-max")
    ladder = np.geomspace(args.lambda_min, args.lambda_max, args.points)
    fit = vdc_decay_fit(args.phase, ladder, m=args.m)
    lines = ["lambda,abs_integral,scaled"]
    for lam, v in zip(fit.lams, fit.values):
        lines.append(f"{_g(lam)},{_g(v)},{_g(lam ** (1.0 / fit.k) * v)}")
    return lines, {"k": fit.k, "slope": fit.slope, "stderr": fit.stderr,
                   "constant": fit.constant, "top_decade_spread": fit.top_decade_spread}


def cmd_kernel(args):
    from .kernelcheck import constants_by_lambda, kernel_sweep, psi_sq_integral

    lams = [2.0 ** j for j in range(args.lambda_exp_min, args.lambda_exp_max + 1)]
    half = max(1, args.samples // 2)
    rows = kernel_sweep(lams, half, args.seed, args.q, args.alpha, args.m)
    lines = ["lambda,region,dx,dt,modulus,constant"]
    for r in rows:
        lines.append(f"{_g(r.lam)},{r.region},{_g(r.dx)},{_g(r.dt)},{_g(r.modulus)},{_g(r.constant)}")
    consts = constants_by_lambda(rows)
    cmax = max(consts.values())
    spread = (cmax - min(consts.values())) / cmax
    bound_ok = all(r.modulus <= r.lam * psi_sq_integral() + 1e-9 for r in rows)
    return lines, {"constant_max": cmax, "constant_spread": spread,
                   "constants": {_g(k): v for k, v in consts.items()},
                   "psi_sq_integral": psi_sq_integral(), "triangle_bound_holds": bound_ok}


def cmd_ineq(args):
    from .kernelcheck import HLS, Young, young_hls_check

    mode = HLS(args.rho) if args.mode == "hls" else Young(args.a, args.b)
    res = _ints(args.resolutions)
    rep = young_hls_check(args.alpha, args.q, mode, args.trials, res, args.seed)
    lines = ["resolution,trial,ratio"]
    for n in rep.resolutions:
        for j, v in enumerate(rep.ratios[n]):
            lines.append(f"{n},{j},{_g(v)}")
    return lines, {"max_ratio": {str(n): v for n, v in rep.max_ratio.items()}}


COMMANDS = {
    "propagate": cmd_propagate,
    "maximal": cmd_maximal,
    "scaling": cmd_scaling,
    "sufficiency": cmd_scaling,
    "cantor-dim": cmd_cantor_dim,
    "vdc": cmd_vdc,
    "kernel": cmd_kernel,
    "ineq": cmd_ineq,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    except ValidationError as exc:
        print(f"oscimax: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"oscimax: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    threads = args.threads if args.threads is not None else os.environ.get("OSCIMAX_THREADS")
    started = _now()
    try:
        if threads is not None:
            _backend.set_threads(int(threads))
        lines, results = COMMANDS[args.command](args)
        _emit(args, lines, results, started)
    except ValidationError as exc:
        print(f"oscimax: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericBudgetError as exc:
        print(f"oscimax: numeric budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OscimaxError, ValueError) as exc:
        print(f"oscimax: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
