"""Reading and validating harness outputs.

Input files must match the harness schemas exactly; anything else is
refused rather than guessed at.
"""

import csv
import json
import os
from dataclasses import dataclass, field

CHARFN_HEADER = ["t", "re", "im", "modulus", "ci", "regime", "bound"]
DECOUPLING_HEADER = ["trial", "m", "|A|", "|A'|", "ratio", "pass"]
DISTANCE_KEYS = [
    "n", "p", "epsilon", "sup_lattice", "l1", "anticoncentration",
    "predicted_bound", "source", "samples",
]

KINDS = ("charfn-regimes", "distance-trend", "alpha-histogram")


class SchemaError(ValueError):
    """Input file does not match the expected harness schema."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    xscale: str = "linear"  # linear | log
    yscale: str = "log"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("at least one input file is required")
        for scale in (self.xscale, self.yscale):
            if scale not in ("linear", "log"):
                raise SchemaError(f"axis scale must be linear or log, got {scale!r}")


@dataclass(frozen=True)
class CharfnData:
    rows: list[dict]
    summary: dict  # n, p, gamma, sigma, k_cut


@dataclass(frozen=True)
class AlphaData:
    ratios: list[float]
    m: int


def _read_rows(path: str, header: list[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if got != header:
            raise SchemaError(
                f"{path}: header {got} does not match harness schema {header}"
            )
        rows = [dict(zip(header, row)) for row in reader]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_charfn(path: str) -> CharfnData:
    """Load a charfn results.csv plus the summary.json beside it."""
    rows = _read_rows(path, CHARFN_HEADER)
    summary_path = os.path.join(os.path.dirname(path), "summary.json")
    if not os.path.exists(summary_path):
        raise SchemaError(f"{summary_path}: missing (needed for regime boundaries)")
    with open(summary_path) as fh:
        summary = json.load(fh)
    for key in ("n", "p", "gamma", "sigma", "k_cut"):
        if key not in summary:
            raise SchemaError(f"{summary_path}: missing key {key!r}")
    return CharfnData(rows=rows, summary=summary)


def load_distance_report(path: str) -> dict:
    """Load one DistanceReport JSON; keys must match the harness schema."""
    with open(path) as fh:
        try:
            rep = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    missing = [k for k in DISTANCE_KEYS if k not in rep]
    if missing:
        raise SchemaError(f"{path}: missing keys {missing}")
    return rep


def load_alpha(path: str) -> AlphaData:
    rows = _read_rows(path, DECOUPLING_HEADER)
    return AlphaData(
        ratios=[float(r["ratio"]) for r in rows], m=int(rows[0]["m"])
    )
