"""Command-line interface: the full verification suite plus focused
single-check subcommands, all emitting JSON."""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from .cocycles import (DEFAULT_TAU_SEQUENCE, PhaseExponent, action_contribution,
                       cocycle_residual, infinitesimal_exponent)
from .algebra import basis_element
from .group import element_from_dict, random_element
from .harness import (_json_safe, default_config, load_config, report_json,
                      run_suite)
from .representations import MOMENTUM_KINDS, rep_to_dict
from .states import random_state
from .verify import (default_sample_points, extract_multiplier,
                     heisenberg_fit, match_exponent)

__all__ = ["main"]

_DEFAULT_XI_DIMS = {"xi0": 3, "xi1": 2, "xi2": 2, "xi_eta": 1, "xi_t": 2}


def _print(doc: dict):
    print(json.dumps(_json_safe(doc), indent=2, sort_keys=True))


def _rep_by_kind(kind: str):
    for rep in default_config().reps:
        if rep.kind == kind:
            return rep
    raise ValueError(f"no default descriptor for kind {kind!r}")


def _load_pair(path: str, dim: int, seed: int):
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        return element_from_dict(doc["r"]), element_from_dict(doc["s"])
    rng = np.random.default_rng(seed)
    return random_element(rng, dim), random_element(rng, dim)


def _cmd_verify_all(args) -> int:
    cfg = load_config(args.config) if args.config else default_config()
    env_seed = os.environ.get("GALIRAY_SEED")
    if env_seed is not None:
        cfg = dataclasses.replace(cfg, seed=int(env_seed))
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    report = run_suite(cfg)
    text = report_json(report)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["suite_pass"] else 1


def _cmd_cocycle(args) -> int:
    dim = args.dim if args.dim is not None else _DEFAULT_XI_DIMS[args.name]
    xi = PhaseExponent(args.name, dim, gamma=args.gamma, lam=args.lam,
                       S=args.S, a1=args.a1, a2=args.a2, t=args.t)
    rng = np.random.default_rng(args.seed)
    max_angle = min(args.scale, math.pi / 3.5)
    worst = 0.0
    for _ in range(args.triples):
        r = random_element(rng, dim, args.scale, max_angle)
        s = random_element(rng, dim, args.scale, max_angle)
        q = random_element(rng, dim, args.scale, max_angle)
        worst = max(worst, cocycle_residual(xi, r, s, q))
    passed = worst < args.tolerance
    _print({"name": args.name, "params": xi.params(),
            "n_triples": args.triples, "max_residual": worst,
            "pass": passed})
    return 0 if passed else 1


def _cmd_multiplier(args) -> int:
    rep = _rep_by_kind(args.rep)
    r, s = _load_pair(args.pair, rep.dim, args.seed)
    state = random_state(args.seed + 1, rep.dim)
    points = default_sample_points(state, seed=args.seed + 2)
    report = extract_multiplier(rep, r, s, args.t, state, points)
    report = match_exponent(rep, r, s, args.t, report)
    passed = (report.constancy_spread < 1e-9
              and report.modulus_error < 1e-10
              and report.matched_exponent[1] < 1e-9)
    _print({
        "rep": rep_to_dict(rep),
        "t": args.t,
        "omega": report.omega,
        "constancy_spread": report.constancy_spread,
        "modulus_error": report.modulus_error,
        "n_points": report.n_points,
        "n_skipped": report.n_skipped,
        "matched_exponent": {"name": report.matched_exponent[0],
                             "residual": report.matched_exponent[1]},
        "pass": passed,
    })
    return 0 if passed else 1


def _cmd_infexp(args) -> int:
    dim = args.dim if args.dim is not None else _DEFAULT_XI_DIMS[args.name]
    xi = PhaseExponent(args.name, dim, gamma=args.gamma)
    X = basis_element(args.x, dim)
    Y = basis_element(args.y, dim)
    result = infinitesimal_exponent(xi, X, Y, DEFAULT_TAU_SEQUENCE)
    _print({
        "name": args.name,
        "x": args.x,
        "y": args.y,
        "gamma": args.gamma,
        "value": result.value,
        "tau_sequence": list(result.tau_sequence),
        "extrapolation_error": result.extrapolation_error,
        "converged": result.converged,
    })
    return 0 if result.converged else 1


def _cmd_heisenberg(args) -> int:
    rep = _rep_by_kind(args.rep)
    fit = heisenberg_fit(rep)
    _print({
        "rep": rep_to_dict(rep),
        "K": fit.K,
        "orientation": fit.orientation,
        "uniform": fit.uniform,
        "per_generator_flips": fit.per_generator_flips,
        "per_generator": fit.per_generator,
        "time_independent": fit.time_independent,
        "max_residual": fit.max_residual,
        "note": fit.note,
    })
    return 0 if fit.max_residual < 1e-9 else 1


def _cmd_action(args) -> int:
    r, s = _load_pair(args.pair, None, 0)
    value = action_contribution(args.gamma, r, s, args.t)
    _print({
        "gamma": args.gamma,
        "t": args.t,
        "value": value,
        "multiplier": complex(math.cos(value), math.sin(value)),
    })
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galiray",
        description="Verification suite for Galilei ray representations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", help="run the full check suite")
    p.add_argument("--config", help="config file (key = value lines or JSON)")
    p.add_argument("--seed", type=int, help="override the suite seed")
    p.add_argument("--json", help="also write the report to this file")
    p.set_defaults(func=_cmd_verify_all)

    p = sub.add_parser("cocycle", help="residual sweep for one phase exponent")
    p.add_argument("name", choices=sorted(_DEFAULT_XI_DIMS))
    p.add_argument("--dim", type=int, choices=(1, 2, 3))
    p.add_argument("--triples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--S", type=float, default=1.0)
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--a2", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(func=_cmd_cocycle)

    p = sub.add_parser("multiplier", help="extract one multiplier")
    p.add_argument("--rep", required=True, choices=MOMENTUM_KINDS)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--pair", help="JSON file with elements r and s")
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=_cmd_multiplier)

    p = sub.add_parser("infexp", help="infinitesimal exponent of a basis pair")
    p.add_argument("name", choices=sorted(_DEFAULT_XI_DIMS))
    p.add_argument("--x", required=True, help="basis name, e.g. b1")
    p.add_argument("--y", required=True, help="basis name, e.g. d1")
    p.add_argument("--dim", type=int, choices=(1, 2, 3))
    p.add_argument("--gamma", type=float, default=1.0)
    p.set_defaults(func=_cmd_infexp)

    p = sub.add_parser("heisenberg", help="fit the evolution constant")
    p.add_argument("--rep", required=True,
                   choices=MOMENTUM_KINDS + ("position1d",))
    p.set_defaults(func=_cmd_heisenberg)

    p = sub.add_parser("action", help="time-extension phase exponent")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--pair", required=True,
                   help="JSON file with elements r and s")
    p.set_defaults(func=_cmd_action)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
