"""Command-line entry point.

Subcommands mirror the experiment kinds: pmf, charfn, decouple, distances,
verify, cover. Each reads an optional JSON config (the manifest fields)
and applies command-line overrides on top. Exit codes: 0 success, 2
invalid parameters, 3 domain violation, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    CoverageError,
    DegenerateDistributionError,
    DomainError,
    InvalidParameterError,
    NumericError,
    ResourceLimitError,
)
from .harness import KIND_ALIASES, ExperimentManifest, run

SUBCOMMANDS = ("pmf", "charfn", "decouple", "distances", "verify", "cover")


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gnplclt",
        description="Triangle-count distribution experiments on G(n,p)",
    )
    sub = top.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON manifest file")
        sp.add_argument("--n", type=int, action="append", help="vertex count (repeatable)")
        sp.add_argument("--p", type=float, action="append", help="edge probability (repeatable)")
        sp.add_argument("--m", type=int, action="append", help="endowed-set size (repeatable)")
        sp.add_argument("--t", type=float, action="append", help="explicit grid t (repeatable)")
        sp.add_argument("--gamma", type=float, help="mid-regime exponent, in (0, 1/8)")
        sp.add_argument("--k", dest="k_cut", type=float, help="Stein range endpoint K")
        sp.add_argument("--epsilon", type=float, help="decay-rate exponent offset")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--samples", type=int, help="Monte Carlo samples per cell")
        sp.add_argument("--trials", type=int, help="trial count for decouple")
        sp.add_argument("--workers", type=int, help="worker thread count")
        sp.add_argument("--out", help="output directory")
    return top


def _manifest_from_args(args: argparse.Namespace) -> ExperimentManifest:
    cfg: dict = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    kind = KIND_ALIASES.get(args.command, args.command)
    cfg["kind"] = kind
    if args.n:
        cfg["n_values"] = args.n
    if args.p:
        cfg["p_values"] = args.p
    if args.m:
        cfg["m_values"] = args.m
    if args.t:
        cfg["t_values"] = args.t
    for key in ("gamma", "k_cut", "epsilon", "seed", "samples", "trials", "workers"):
        v = getattr(args, key)
        if v is not None:
            cfg[key] = v
    if args.out:
        cfg["out_dir"] = args.out
    cfg.setdefault("kind", kind)
    m = ExperimentManifest(**cfg)
    m.validate()
    return m


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        manifest = _manifest_from_args(args)
        paths = run(manifest)
    except (InvalidParameterError, ResourceLimitError, TypeError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except (DomainError, CoverageError, DegenerateDistributionError) as exc:
        print(f"domain violation: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
