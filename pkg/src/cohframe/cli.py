"""Command-line front end: ``cohframe verify <suite> [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
configuration error or an unwritable output path.  Config files are strict
JSON objects whose keys are option names; command-line flags override them.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import closure, ladder, plane, propagator, suites, transforms, weak
from .fock import FockSpace

SUITE_NAMES = list(suites.SUITES) + ["all"]
TOL_RANGE = (1e-12, 1e-2)


class ConfigError(ValueError):
    pass


def _parser():
    p = argparse.ArgumentParser(prog="cohframe", description="Verify coherent-state closure and frame identities.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.add_argument("--config", help="JSON file with option values (flags win)")
    v.add_argument("--tol", type=float, help="tolerance in [1e-12, 1e-2] (default 1e-6)")
    v.add_argument("--block", type=int, help="Fock block size for the standard closure")
    v.add_argument("--lambda", dest="lambda_", type=float, nargs="+", help="closure scale factors")
    v.add_argument("--zeta", nargs="+", help="Weyl offsets, e.g. 0.3+0.2j")
    v.add_argument("--two-j", dest="two_j", type=int, nargs="+", help="spin values as 2j")
    v.add_argument("--n", type=int, help="plane frame size")
    v.add_argument("--large-n", dest="large_n", type=int, help="plane frame size for the limit checks")
    v.add_argument("--eps", help="plane angle deficit, e.g. sqrt2/35")
    v.add_argument("--convention", choices=["uniform", "endpoint"], help="plane step convention")
    v.add_argument("--seed", type=int, help="seed for Monte Carlo checks")
    v.add_argument("--radius", type=float, help="closure grid radius override")
    v.add_argument("--n-radial", dest="n_radial", type=int, help="closure grid radial nodes")
    v.add_argument("--n-angular", dest="n_angular", type=int, help="closure grid angular nodes")
    v.add_argument("--format", choices=["json", "csv"], help="report format (plane defaults to csv)")
    v.add_argument("--output", help="report path (default: stdout)")
    v.add_argument("--export", help="directory for extra CSV tables")
    v.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    return p


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(suites.DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def resolve_config(args):
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(suites.DEFAULTS)
    if args.config:
        cfg.update(_load_config(args.config))
    flags = {
        "tol": args.tol, "block": args.block, "lambda": args.lambda_, "zeta": args.zeta,
        "two_j": args.two_j, "n": args.n, "large_n": args.large_n, "eps": args.eps,
        "convention": args.convention, "seed": args.seed, "radius": args.radius,
        "n_radial": args.n_radial, "n_angular": args.n_angular,
    }
    cfg.update({k: v for k, v in flags.items() if v is not None})
    _validate(cfg)
    return cfg


def _validate(cfg):
    try:
        tol = float(cfg["tol"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"tol must be a number: {exc}") from exc
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ConfigError(f"tol={tol:g} outside [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    cfg["tol"] = tol
    try:
        cfg["lambda"] = suites._float_list(cfg["lambda"])
        cfg["zeta"] = [str(z) for z in suites._complex_list(cfg["zeta"])]
        cfg["b_zeta"] = [str(z) for z in suites._complex_list(cfg["b_zeta"])]
        eps = plane.parse_epsilon(cfg["eps"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if any(lam <= 0 for lam in cfg["lambda"]):
        raise ConfigError("lambda values must be positive")
    if any(abs(complex(z)) > 2 for z in cfg["zeta"]):
        raise ConfigError("|zeta| <= 2 required")
    if not 0 < eps < 0.5:
        raise ConfigError("eps must lie in (0, 0.5)")
    if int(cfg["n"]) < 2 or int(cfg["large_n"]) < 2:
        raise ConfigError("frame sizes must be at least 2")
    if any(int(t) < 0 for t in cfg["two_j"]):
        raise ConfigError("two_j values must be nonnegative")
    if cfg["convention"] not in ("uniform", "endpoint"):
        raise ConfigError(f"unknown convention {cfg['convention']!r}")


def _check_writable(path):
    if path is None:
        return
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d) or not os.access(d, os.W_OK) or (os.path.exists(path) and not os.access(path, os.W_OK)):
        raise ConfigError(f"output path {path} is not writable")


# --- extra tables ------------------------------------------------------------


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def extra_tables(suite, cfg):
    """``{filename: csv text}`` of supporting data for one suite."""
    if suite == "closure":
        rep = closure.standard_closure(cfg["block"], min(cfg["tol"], 1e-8))
        return {"closure_convergence.csv": rep.convergence_csv()}
    if suite == "weak":
        zetas = np.logspace(-3, -1, 9) * np.exp(0.6j)
        return {"weak_sweep.csv": _csv(["re_zeta", "im_zeta", "re_H", "im_H", "residual"],
                                       weak.zeta_sweep(0.7 - 0.4j, zetas, ladder.harmonic(1.0)))}
    if suite == "propagator":
        z1, z2 = 0.5, 0.4 - 0.2j
        _, _, rows = propagator.slicing_error_fit(z1, z2, [0.4, 0.2, 0.1, 0.05], ladder.harmonic(1.0),
                                                  lambda T: propagator.oscillator_propagator(z1, z2, T))
        return {"propagator_convergence.csv": _csv(["T", "tau", "abs_error"], rows)}
    if suite == "transforms":
        space = FockSpace(20)
        vac = np.zeros((space.dim, space.dim))
        vac[0, 0] = 1.0
        axis = np.linspace(-3, 3, 13)
        return {"weyl_grid.csv": _csv(["q", "p", "re", "im"], transforms.weyl_grid(vac, axis, axis, space))}
    if suite == "plane":
        eps = plane.parse_epsilon(cfg["eps"])
        fr = plane.PlaneFrame(int(cfg["n"]), eps, convention=cfg["convention"])
        sweep = plane.sweep([10, 100, 1000, 10_000, 100_000], eps)
        return {
            "plane_frame.csv": fr.coordinates_csv(),
            "plane_sweep.csv": _csv(["N", "A_dev", "B_dev_raw", "B_dev_pv", "L", "J_plus", "J_minus"], sweep),
        }
    return {}


# --- reports -----------------------------------------------------------------


def run_suites(names, cfg, timing=False):
    results, times = [], {}
    for name in names:
        t0 = time.perf_counter()
        for c in suites.SUITES[name](cfg):
            d = c.to_dict()
            d["name"] = f"{name}: {d['name']}"
            results.append(d)
        times[name] = time.perf_counter() - t0
    return results, (times if timing else None)


def render(cfg, results, timing, fmt):
    if fmt == "json":
        clean = {k: (v if not isinstance(v, float) or math.isfinite(v) else str(v)) for k, v in cfg.items()}
        for r in results:
            for k in ("value", "expected", "tolerance"):
                if not math.isfinite(r[k]):
                    r[k] = str(r[k])
        return json.dumps({"config": clean, "results": results, "timing": timing},
                          sort_keys=True, indent=2) + "\n"
    rows = [(r["name"], r["value"], r["expected"], r["tolerance"], r["pass"]) for r in results]
    return _csv(["name", "value", "expected", "tolerance", "pass"], rows)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        _check_writable(args.output)
        if args.export and not os.path.isdir(args.export):
            raise ConfigError(f"export directory {args.export} does not exist")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    fmt = args.format or ("csv" if args.suite == "plane" else "json")
    try:
        results, timing = run_suites(names, cfg, args.timing)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, results, timing, fmt)
    tables = {}
    export = args.export
    if export is None and args.suite == "plane" and args.output:
        export = os.path.dirname(os.path.abspath(args.output))
    if export:
        for name in names:
            tables.update(extra_tables(name, cfg))
    try:
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        for fname, body in tables.items():
            with open(os.path.join(export, fname), "w") as fh:
                fh.write(body)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    failed = [r["name"] for r in results if not r["pass"]]
    for name in failed:
        print(f"FAIL {name}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
