"""Command-line interface: primes | nodes | integrate | wce | convergence.

Machine-readable results go to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 usage error, 2 computation error.  A --config file (JSON or
TOML) supplies defaults; explicit flags always win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import QmcError
from .experiments import ExperimentConfig, run_convergence, write_outputs
from .integrands import TestFunctionSpec, make_integrand
from .korobov import KorobovParams, ProductWeights, parse_weights
from .lattice import LatticeRule
from .median_rule import HChoice, MedianRuleConfig, integrate_median, integrate_median_tent
from .primes import primes_in_range
from .wce import wce_bruteforce, wce_kernel

__all__ = ["dispatch", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


_REQUIRED = {
    "primes": ("n",),
    "nodes": ("p", "z"),
    "integrate": ("fn", "d", "n"),
    "wce": ("p", "z", "alpha", "gamma"),
    "convergence": ("fn", "d", "grid", "out"),
}

_DEFAULTS = {
    "primes": {},
    "nodes": {},
    "integrate": {"seed": 0, "tent": False, "h": "loglog", "trace": False,
                  "c1": 2.0, "c2": 3.0, "a": 1.0, "c": None, "theta": 0.5,
                  "workers": None},
    "wce": {"brute": None, "workers": None},
    "convergence": {"seed": 0, "tent": False, "h": "loglog", "R": 100,
                    "c1": 2.0, "c2": 3.0, "a": 1.0, "c": None, "theta": 0.5,
                    "floor": 1e-13, "min_n": 10.0, "workers": None},
}


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--config", type=str, default=None)
    common.add_argument("--out", type=str, default=None)

    parser = _Parser(prog="medianqmc",
                     description="Median lattice rule for high-dimensional integration")
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("primes", parents=[common], help="print the prime pool for n")
    p.add_argument("--n", type=int, default=None, help="budget parameter n >= 2")

    p = sub.add_parser("nodes", parents=[common], help="print lattice nodes as exact rationals")
    p.add_argument("--p", type=int, default=None, help="prime modulus")
    p.add_argument("--z", type=str, default=None, help="generating vector, comma separated")

    p = sub.add_parser("integrate", parents=[common], help="run the median rule on a test function")
    _add_fn_flags(p)
    p.add_argument("--n", type=int, default=None, help="budget parameter n >= 2")
    p.add_argument("--tent", action=argparse.BooleanOptionalAction, default=None,
                   help="compose with the tent transform (non-periodic integrands)")
    p.add_argument("--h", type=str, default=None, help="loglog | log | const:<c>")
    p.add_argument("--trace", action=argparse.BooleanOptionalAction, default=None,
                   help="also print the full replicate trace as JSON")

    p = sub.add_parser("wce", parents=[common], help="worst-case error of one lattice rule")
    p.add_argument("--p", type=int, default=None, help="prime modulus")
    p.add_argument("--z", type=str, default=None, help="generating vector, comma separated")
    p.add_argument("--alpha", type=float, default=None, help="smoothness")
    p.add_argument("--gamma", type=str, default=None,
                   help="product weights: const:<c> | g1,g2,... | j^-<beta>")
    p.add_argument("--brute", type=int, default=None,
                   help="also run the truncated dual sum with this frequency bound")

    p = sub.add_parser("convergence", parents=[common], help="error-vs-n experiment, CSV output")
    _add_fn_flags(p)
    p.add_argument("--grid", type=str, default=None,
                   help="n values: 'n1,n2,...' or 'log:<lo>:<hi>:<count>'")
    p.add_argument("--R", type=int, default=None, help="independent realizations per n")
    p.add_argument("--tent", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--h", type=str, default=None, help="loglog | log | const:<c>")
    p.add_argument("--floor", type=float, default=None, help="error floor for the regression")
    p.add_argument("--min-n", dest="min_n", type=float, default=None,
                   help="regression lower cutoff on n")

    return parser


def _add_fn_flags(p: _Parser) -> None:
    p.add_argument("--fn", type=str, default=None, help="f1 | f2 | fac | nonper")
    p.add_argument("--d", type=int, default=None, help="dimension")
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)


def _load_config(path: str) -> dict:
    try:
        if path.endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise _UsageError(f"cannot read config file: {err}") from err
    except ValueError as err:
        raise _UsageError(f"cannot parse config file {path}: {err}") from err


def _merge(args: argparse.Namespace) -> argparse.Namespace:
    """Explicit flags > config file > built-in defaults."""
    config = _load_config(args.config) if args.config else {}
    known = vars(args)
    for key, value in config.items():
        if key in known and known[key] is None:
            setattr(args, key, value)
    defaults = dict(_DEFAULTS[args.cmd])
    defaults.setdefault("seed", 0)
    for key, fallback in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, fallback)
    for key in _REQUIRED[args.cmd]:
        if getattr(args, key, None) is None:
            raise _UsageError(f"{args.cmd}: missing required option --{key}")
    if args.workers is None:
        args.workers = os.cpu_count() or 1
    return args


def _parse_int_list(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError as err:
        raise _UsageError(f"cannot parse integer list {text!r}") from err


def _parse_grid(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    text = str(text)
    if text.startswith("log:"):
        try:
            _, lo, hi, count = text.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
        except ValueError as err:
            raise _UsageError(f"grid spec {text!r} is not log:<lo>:<hi>:<count>") from err
        import numpy as np
        values = sorted({int(round(v)) for v in np.geomspace(lo, hi, count)})
        return tuple(values)
    return _parse_int_list(text)


def _function_spec(args) -> TestFunctionSpec:
    kind = args.fn
    d = int(args.d)
    if kind == "f1":
        return TestFunctionSpec.f1(d, args.c1)
    if kind == "f2":
        return TestFunctionSpec.f2(d, args.c2)
    if kind == "fac":
        c = args.c if args.c is not None else 2.0 * args.a + 1.0
        return TestFunctionSpec.fac(d, args.a, c)
    if kind == "nonper":
        return TestFunctionSpec.nonperiodic(d, args.theta)
    raise _UsageError(f"unknown --fn {kind!r} (use f1 | f2 | fac | nonper)")


def _cmd_primes(args) -> int:
    pool = primes_in_range(int(args.n))
    print(" ".join(str(p) for p in pool.primes))
    return 0


def _cmd_nodes(args) -> int:
    z = _parse_int_list(args.z)
    rule = LatticeRule(int(args.p), z)
    p = rule.p
    for k in range(p):
        print(",".join(f"{(k * zj) % p}/{p}" for zj in rule.z))
    return 0


def _cmd_integrate(args) -> int:
    spec = _function_spec(args)
    f = make_integrand(spec)
    cfg = MedianRuleConfig(n=int(args.n), d=spec.d, master_seed=int(args.seed),
                           h_choice=HChoice.parse(args.h))
    run = integrate_median_tent if args.tent else integrate_median
    trace = run(f, cfg, workers=int(args.workers))
    print(f"estimate_re {trace.final.real!r}")
    print(f"estimate_im {trace.final.imag!r}")
    print(f"replicates {len(trace.replicates)}")
    print(f"total_evals {trace.total_evals}")
    if args.trace:
        payload = {
            "final": [trace.final.real, trace.final.imag],
            "replicates": [
                {"p": r.p, "z": list(r.z),
                 "estimate": [r.estimate.real, r.estimate.imag]}
                for r in trace.replicates
            ],
            "total_evals": trace.total_evals,
        }
        print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_wce(args) -> int:
    z = _parse_int_list(args.z)
    rule = LatticeRule(int(args.p), z)
    weights = parse_weights(args.gamma, len(z))
    alpha = float(args.alpha)
    kernel_val = None
    if alpha.is_integer() and 1 <= int(alpha) <= 5 and isinstance(weights, ProductWeights):
        kernel_val = wce_kernel(rule, int(alpha), weights)
        print(f"wce_kernel {kernel_val!r}")
    if args.brute is not None:
        params = KorobovParams(alpha=alpha, weights=weights, d=len(z))
        res = wce_bruteforce(rule, params, int(args.brute))
        print(f"wce_bruteforce {res.value!r}")
        print(f"truncation_bound {res.truncation_bound!r}")
        if kernel_val is not None:
            print(f"difference {abs(kernel_val - res.value)!r}")
    elif kernel_val is None:
        raise _UsageError(
            "non-integer alpha (or alpha > 5) has no kernel route; pass --brute <H>")
    return 0


def _cmd_convergence(args) -> int:
    spec = _function_spec(args)
    config = ExperimentConfig(
        spec=spec,
        n_grid=_parse_grid(args.grid),
        realizations=int(args.R),
        master_seed=int(args.seed),
        tent=bool(args.tent),
        h_choice=HChoice.parse(args.h),
        error_floor=float(args.floor),
        regression_min_n=float(args.min_n),
    )
    table = run_convergence(config, workers=int(args.workers))
    write_outputs(table, config, args.out)
    print(f"rows {len(table.rows)}")
    if table.slope is None:
        print("slope insufficient-data")
    else:
        print(f"slope {table.slope!r}")
        print(f"intercept {table.intercept!r}")
    print(f"csv {args.out}")
    return 0


_HANDLERS = {
    "primes": _cmd_primes,
    "nodes": _cmd_nodes,
    "integrate": _cmd_integrate,
    "wce": _cmd_wce,
    "convergence": _cmd_convergence,
}


def dispatch(argv) -> int:
    """Route argv to a subcommand; 0 success, 1 usage error, 2 computation error."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd is None:
            raise _UsageError("missing subcommand (primes | nodes | integrate | wce | convergence)")
        args = _merge(args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        print("run 'medianqmc --help' for usage", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help path
        return 0 if exc.code in (0, None) else 1
    try:
        return _HANDLERS[args.cmd](args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except QmcError as err:
        print(f"computation error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
