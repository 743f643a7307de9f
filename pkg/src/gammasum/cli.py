"""Command-line interface.

Exit status: 0 success, 1 certification failure, 2 usage or configuration
error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import List, Optional

import numpy as np

from . import __version__, jsonio
from .certify import SUITE_NAMES, explore_small_shape, replay, run_suite
from .density import ENGINES, default_grid, density_curve, select_engine
from .entropy import MAX_FINITE_ORDER, entropy, max_density
from .errors import ConfigError, DivergenceError, GammaSumError
from .model import GammaSumModel, WeightVector
from .numerics import QuadratureConfig
from .transforms import central_moments

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

ENGINE_ALIASES = {"auto": None, "cf": "cf_inversion", **{e: e for e in ENGINES}}


def parse_grid(spec: str) -> np.ndarray:
    """``min:max:count`` -> ``count`` evenly spaced points."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like min:max:count, got {spec!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"cannot parse grid {spec!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo and count >= 2):
        raise ConfigError(f"grid needs finite min < max and count >= 2, got {spec!r}")
    return np.linspace(lo, hi, count)


def parse_orders(spec: str) -> List[float]:
    out = []
    for tok in spec.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        try:
            val = math.inf if tok in ("inf", "+inf", "infinity") else float(tok)
        except ValueError:
            raise ConfigError(f"cannot parse order {tok!r}") from None
        if not (val >= 0 and (val <= MAX_FINITE_ORDER or math.isinf(val))):
            raise ConfigError(f"orders must lie in [0, {MAX_FINITE_ORDER:g}] or be inf, got {tok!r}")
        out.append(val)
    if not out:
        raise ConfigError("no orders given")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gammasum",
        description="Transforms, densities, entropies and certificates for weighted gamma sums.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--gamma", type=float, required=True, help="shape of each gamma summand")
            sp.add_argument("--weights", required=True, help="comma-separated squared coefficients a_j")
            sp.add_argument("--normalize", action="store_true", help="rescale weights to sum to one")
        sp.add_argument("--abs-tol", type=float, default=1e-9)
        sp.add_argument("--rel-tol", type=float, default=1e-9)
        sp.add_argument("--output", "-o", default=None, help="output file (default: stdout)")

    sp = sub.add_parser("density", help="density on a grid (CSV or JSON)")
    common(sp)
    sp.add_argument("--engine", choices=sorted(ENGINE_ALIASES), default="auto")
    sp.add_argument("--grid", default=None, help="min:max:count (default: graded grid over the bulk)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("entropy", help="Shannon (alpha=1) or Renyi entropies")
    common(sp)
    sp.add_argument("--alpha", default="1", help="comma-separated orders; 'inf' gives -ln M")
    sp.add_argument("--engine", choices=("auto", "closed", "convolution", "cf", "cf_inversion"), default="auto")

    sp = sub.add_parser("moments", help="cumulants and central moments")
    common(sp)
    sp.add_argument("--max-order", type=int, default=4)

    sp = sub.add_parser("maxdensity", help="supremum of the density and its location")
    common(sp)
    sp.add_argument("--engine", choices=("auto", "closed", "convolution", "cf", "cf_inversion"), default="auto")

    sp = sub.add_parser("certify", help="run certification suites")
    common(sp, model=False)
    sp.add_argument("--suite", default="all", help=f"one of {', '.join(SUITE_NAMES)}, all")
    sp.add_argument("--trials", type=int, default=100, help="draws per suite setting")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.add_argument("--replay", default=None, help="JSON case or report to re-run")

    sp = sub.add_parser("explore", help="maximal density for small shapes (no verdict)")
    common(sp, model=False)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    return p


def _model(args) -> GammaSumModel:
    return GammaSumModel(args.gamma, WeightVector.parse(args.weights, normalize=args.normalize))


def _quad_cfg(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol)
    except GammaSumError as exc:
        raise ConfigError(str(exc)) from None


def _base_config(args, model: Optional[GammaSumModel] = None) -> dict:
    cfg = {"command": args.command}
    if model is not None:
        # weights are recorded after any normalization, so the flag itself is not needed
        cfg.update(gamma=model.shape, weights=list(model.weights.a))
    cfg.update(abs_tol=args.abs_tol, rel_tol=args.rel_tol, output=args.output)
    return cfg


def _record(config: dict, results) -> str:
    return jsonio.dumps({"config": config, "results": results, "version": __version__})


def cmd_density(args) -> (str, int):
    model = _model(args)
    qcfg = _quad_cfg(args)
    engine = ENGINE_ALIASES[args.engine] or select_engine(model)
    grid = parse_grid(args.grid) if args.grid else default_grid(model, cfg=qcfg)
    config = _base_config(args, model)
    config.update(engine=engine, grid=args.grid, format=args.format)
    curve = density_curve(model, grid, engine, qcfg)
    if args.format == "csv":
        curve.meta = {"config": config, "version": __version__}
        return curve.to_csv(), EXIT_OK
    results = {"engine": curve.engine, "x": curve.grid, "density": curve.values, "err_est": curve.err_est}
    return _record(config, results), EXIT_OK


def cmd_entropy(args):
    model = _model(args)
    qcfg = _quad_cfg(args)
    orders = parse_orders(args.alpha)
    engine = ENGINE_ALIASES[args.engine]
    config = _base_config(args, model)
    config.update(alpha=orders, engine=args.engine)
    results = []
    for al in orders:
        try:
            results.append(entropy(model, al, qcfg, engine).to_dict())
        except DivergenceError as exc:
            results.append({"order": al, "value": exc.value, "err_est": 0.0,
                            "engine": engine or "auto", "divergent": True})
    return _record(config, results), EXIT_OK


def cmd_moments(args):
    model = _model(args)
    config = _base_config(args, model)
    config.update(max_order=args.max_order)
    table = central_moments(model, args.max_order)
    return _record(config, table.to_dict()), EXIT_OK


def cmd_maxdensity(args):
    model = _model(args)
    qcfg = _quad_cfg(args)
    engine = ENGINE_ALIASES[args.engine]
    config = _base_config(args, model)
    config.update(engine=args.engine)
    md = max_density(model, qcfg, engine)
    return _record(config, dict(md.to_dict(), finite=md.finite)), EXIT_OK


def cmd_certify(args):
    qcfg = _quad_cfg(args)
    if args.trials < 0 or args.jobs < 1:
        raise ConfigError("trials must be >= 0 and jobs >= 1")
    config = _base_config(args)
    config.update(suite=args.suite, trials=args.trials, seed=args.seed, jobs=args.jobs,
                  replay=args.replay)
    if args.replay:
        try:
            with open(args.replay) as fh:
                record = jsonio.loads(fh.read())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read replay file {args.replay!r}: {exc}") from None
        records = record["results"] if "results" in record else [record]
        reports = [replay(r, qcfg) for r in records]
    else:
        names = SUITE_NAMES if args.suite == "all" else [args.suite]
        if args.suite != "all" and args.suite not in SUITE_NAMES:
            raise ConfigError(f"unknown suite {args.suite!r}; expected one of {', '.join(SUITE_NAMES)} or all")
        reports = []
        for name in names:
            t0 = time.perf_counter()
            rep = run_suite(name, args.trials, args.seed, qcfg, jobs=args.jobs)
            print(f"{name}: {rep.verdict} ({len(rep.cases)} cases, min margin {rep.min_margin:.3g}, "
                  f"{time.perf_counter() - t0:.1f}s)", file=sys.stderr)
            reports.append(rep)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return _record(config, [r.to_dict() for r in reports]), status


def cmd_explore(args):
    qcfg = _quad_cfg(args)
    config = _base_config(args)
    config.update(gamma=args.gamma, n=args.n, trials=args.trials, seed=args.seed)
    return _record(config, explore_small_shape(args.gamma, args.n, args.trials, args.seed, qcfg)), EXIT_OK


COMMANDS = {
    "density": cmd_density,
    "entropy": cmd_entropy,
    "moments": cmd_moments,
    "maxdensity": cmd_maxdensity,
    "certify": cmd_certify,
    "explore": cmd_explore,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, status = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GammaSumError as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
