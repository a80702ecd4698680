"""Experiment orchestration: manifests, dispatch, caching, file outputs.

A manifest fully determines an experiment: kind, parameter grid, seed,
sample budget, worker count. Every run writes results.csv, summary.json
and manifest.echo into a parameter-keyed directory with no timestamps, so
rerunning the same manifest overwrites the same path with byte-identical
CSV bodies regardless of worker count.
"""

from __future__ import annotations

import json
import math
import os
import shutil
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds, charfn, decoupling, enumeration, metrics
from .enumeration import DEFAULT_MAX_N, TriangleEdgeTable, build_table
from .errors import InvalidParameterError
from .graphs import moments

KINDS = ("pmf", "charfn", "decoupling", "distances", "toolbox-verify", "cover-check")

# CLI subcommand spellings for the same experiments
KIND_ALIASES = {"decouple": "decoupling", "verify": "toolbox-verify", "cover": "cover-check"}


@dataclass(frozen=True)
class ExperimentManifest:
    kind: str
    n_values: list = field(default_factory=list)
    p_values: list = field(default_factory=list)
    m_values: list = field(default_factory=list)
    t_values: list | None = None  # explicit t-grid; None means built per cell
    gamma: float = 0.05
    k_cut: float | None = None
    epsilon: float = 0.1
    seed: int = 0
    samples: int = 10**5
    trials: int = 1000
    workers: int = 1
    out_dir: str = "out"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ExperimentManifest":
        d = json.loads(text)
        kind = d.get("kind", "")
        d["kind"] = KIND_ALIASES.get(kind, kind)
        m = ExperimentManifest(**d)
        m.validate()
        return m

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown experiment kind {self.kind!r}")
        if not 0.0 < self.gamma < 0.125:
            raise InvalidParameterError(
                f"gamma must be in (0, 1/8), got {self.gamma}"
            )
        if self.kind != "toolbox-verify":
            if not self.n_values:
                raise InvalidParameterError("n_values must be nonempty")
            if not self.p_values:
                raise InvalidParameterError("p_values must be nonempty")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")


def _fmt(x) -> str:
    """Compact, unambiguous number tokens for directory keys."""
    if isinstance(x, float):
        return repr(x).replace(".", "p").replace("-", "m")
    return str(x)


def _cell_dir(manifest: ExperimentManifest, **cell) -> str:
    parts = [manifest.kind] + [f"{k}{_fmt(v)}" for k, v in cell.items()]
    parts.append(f"seed{manifest.seed}")
    if manifest.kind in ("pmf", "charfn", "distances"):
        parts.append(f"samples{manifest.samples}")
    if manifest.kind == "decoupling":
        parts.append(f"trials{manifest.trials}")
    return os.path.join(manifest.out_dir, "_".join(parts))


def _csv(rows: list[list], header: list[str]) -> str:
    def tok(v) -> str:
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(tok(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write_outputs(
    path: str, csv_body: str, summary: dict, manifest: ExperimentManifest
) -> str:
    """Write the three artifact files atomically via a staging directory."""
    tmp = path + ".partial"
    if os.path.exists(tmp):
        shutil.rmtree(tmp)
    os.makedirs(tmp)
    try:
        with open(os.path.join(tmp, "results.csv"), "w", newline="\n") as fh:
            fh.write(csv_body)
        with open(os.path.join(tmp, "summary.json"), "w", newline="\n") as fh:
            fh.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        with open(os.path.join(tmp, "manifest.echo"), "w", newline="\n") as fh:
            fh.write(manifest.to_json() + "\n")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    if os.path.exists(path):
        shutil.rmtree(path)
    os.replace(tmp, path)
    return path


def cache_path(n: int, cache_dir: str) -> str:
    return os.path.join(cache_dir, f"triangle_edge_table_n{n}.csv")


def cache(table: TriangleEdgeTable, cache_dir: str) -> str:
    """Persist an enumeration table; the round trip is bit-exact."""
    os.makedirs(cache_dir, exist_ok=True)
    path = cache_path(table.n, cache_dir)
    enumeration.save_table(table, path)
    return path


def load_cache(n: int, cache_dir: str, max_n: int = DEFAULT_MAX_N) -> TriangleEdgeTable:
    """Load the cached table for n, rebuilding on absence or corruption."""
    path = cache_path(n, cache_dir)
    if os.path.exists(path):
        try:
            return enumeration.load_table(path)
        except (ValueError, OSError):
            pass  # fall through to rebuild
    table = build_table(n, max_n=max_n)
    cache(table, cache_dir)
    return table


def _run_pmf(manifest: ExperimentManifest, n: int, p: float) -> tuple[str, dict]:
    if n <= DEFAULT_MAX_N:
        pmf = metrics.oracle_pmf(build_table(n), p)
    else:
        pmf = metrics.mc_pmf(n, p, manifest.samples, manifest.seed, manifest.workers)
    cis = pmf.ci if pmf.ci is not None else np.zeros(pmf.support.size)
    rows = [
        [int(k), float(q), float(ci)]
        for k, q, ci in zip(pmf.support, pmf.probs, cis)
    ]
    summary = {
        "n": n,
        "p": p,
        "source": pmf.source,
        "total_mass": float(pmf.probs.sum()),
        "samples": pmf.samples,
    }
    return _csv(rows, ["k", "prob", "ci"]), summary


def _run_charfn(manifest: ExperimentManifest, n: int, p: float) -> tuple[str, dict]:
    mom = moments(n, p)
    if manifest.t_values:
        grid = np.asarray(manifest.t_values, dtype=np.float64)
    else:
        grid = charfn.build_t_grid(n, p, manifest.gamma, manifest.k_cut, m=mom)
    series = charfn.estimate_charfn(
        n, p, grid, manifest.samples, manifest.seed, workers=manifest.workers
    )
    rows = []
    regimes: dict[str, int] = {}
    for t, z, ci in zip(series.t_grid, series.estimates, series.ci_radius):
        cls = charfn.classify_regime(
            n, p, float(t), manifest.gamma, manifest.k_cut, m=mom
        )
        regimes[cls.regime] = regimes.get(cls.regime, 0) + 1
        rows.append(
            [
                float(t),
                float(z.real),
                float(z.imag),
                float(abs(z)),
                float(ci),
                cls.regime,
                float(cls.bound_value) if cls.bound_value is not None else "",
            ]
        )
    k_cut = manifest.k_cut
    if k_cut is None:
        k_cut = charfn.default_stein_cutoff(n, p, manifest.gamma)
    summary = {
        "n": n,
        "p": p,
        "gamma": manifest.gamma,
        "sigma": mom.sigma,
        "k_cut": float(k_cut),
        "samples": series.samples_used,
        "regime_counts": regimes,
        "edge_rate_candidates": charfn.edge_rate_candidates(n, p),
    }
    return _csv(rows, ["t", "re", "im", "modulus", "ci", "regime", "bound"]), summary


def _run_decoupling(
    manifest: ExperimentManifest, n: int, p: float, m: int
) -> tuple[str, dict]:
    rows = []
    if m == 1:
        rep = decoupling.single_vertex_trial(n, p, manifest.trials, manifest.seed)
        for i, sz in enumerate(rep.a_prime_sizes.tolist()):
            rows.append(
                [i, m, rep.a_size, sz, sz / rep.a_size, int(sz >= rep.threshold)]
            )
        summary = {
            "n": n,
            "p": p,
            "m": m,
            "trials": rep.trials,
            "frequency": rep.freq,
            "threshold": rep.threshold,
            "bound": rep.bound,
            "sym_diff_mean": float(rep.sym_diff_sizes.mean()),
            "sym_diff_mean_expected": rep.sym_diff_mean_expected,
        }
    else:
        rep = decoupling.typical_alpha_trial(n, m, p, manifest.trials, manifest.seed)
        for i, ratio in enumerate(rep.ratios_abs.tolist()):
            sz = int(round(ratio * rep.a_size))
            rows.append([i, m, rep.a_size, sz, ratio, int(ratio >= rep.threshold)])
        summary = {
            "n": n,
            "p": p,
            "m": m,
            "trials": rep.trials,
            "frequency_abs_window": rep.freq_abs,
            "frequency_signed_window": rep.freq_signed,
            "threshold_ratio": rep.threshold,
            "expected_alpha_sq": rep.expected_alpha_sq,
            "empirical_alpha_sq": rep.empirical_alpha_sq,
        }
    return _csv(rows, ["trial", "m", "|A|", "|A'|", "ratio", "pass"]), summary


def _run_distances(manifest: ExperimentManifest, n: int, p: float) -> tuple[str, dict]:
    if n <= DEFAULT_MAX_N:
        pmf = metrics.oracle_pmf(build_table(n), p)
    else:
        pmf = metrics.mc_pmf(n, p, manifest.samples, manifest.seed, manifest.workers)
    rep = metrics.distance_report(pmf, moments(n, p), manifest.epsilon)
    rows = [
        [
            rep.n,
            rep.p,
            rep.epsilon,
            rep.sup_lattice,
            rep.l1,
            rep.anticoncentration,
            rep.predicted_bound,
            rep.source,
            rep.samples,
        ]
    ]
    header = [
        "n",
        "p",
        "epsilon",
        "sup_lattice",
        "l1",
        "anticoncentration",
        "predicted_bound",
        "source",
        "samples",
    ]
    return _csv(rows, header), json.loads(rep.to_json())


def _run_toolbox_verify(manifest: ExperimentManifest) -> tuple[str, dict]:
    rows = []
    # Bernoulli charfn bound domination on a dense (p, t) grid
    viol = 0
    pts = 0
    for pv in np.linspace(0.01, 0.99, 100):
        for tv in np.linspace(-4 * math.pi, 4 * math.pi, 100):
            pts += 1
            if bounds.bernoulli_charfn_modulus(
                pv, tv
            ) > bounds.binomial_charfn_bound(pv, tv) + 1e-12:
                viol += 1
    rows.append(["charfn_bound_domination", pts, viol, int(viol == 0)])
    # Chernoff vs exact binomial two-sided tails
    viol = 0
    pts = 0
    for nn in range(1, 31):
        for pv in [0.1 * i for i in range(1, 10)]:
            for tv in range(0, nn + 1):
                pts += 1
                if bounds.binomial_two_sided_tail(
                    nn, pv, tv
                ) > bounds.chernoff_bound(nn * pv, tv) + 1e-12:
                    viol += 1
    rows.append(["chernoff_domination", pts, viol, int(viol == 0)])
    # derivative profile closed form vs brute-force enumeration
    viol = 0
    pts = 0
    for nn in range(3, 7):
        for pv in [0.1 * i for i in range(1, 10)]:
            pts += 1
            a = bounds.triangle_derivative_profile(nn, pv).as_tuple()
            b = bounds.triangle_derivative_profile_bruteforce(nn, pv).as_tuple()
            if any(abs(x - y) > 1e-12 for x, y in zip(a, b)):
                viol += 1
    rows.append(["derivative_profile_oracle", pts, viol, int(viol == 0)])
    # Paley-Zygmund on a seeded positive sample
    gen = np.random.Generator(np.random.Philox(key=(manifest.seed, 0)))
    vals = gen.exponential(size=10**4)
    lhs, rhs, ok = bounds.paley_zygmund_check(vals, 0.5)
    rows.append(["paley_zygmund", 1, int(not ok), int(ok)])
    # Gaussian tail chain at a few K
    viol = 0
    pts = 0
    for k in (2.0, 3.0, 5.0):
        pts += 1
        b = bounds.gaussian_tail(k)
        tail = math.sqrt(math.pi / 2.0) * math.erfc(k / math.sqrt(2.0))
        if not tail <= b <= math.exp(-k):
            viol += 1
    rows.append(["gaussian_tail_chain", pts, viol, int(viol == 0)])
    summary = {
        "checks": {r[0]: {"points": r[1], "violations": r[2]} for r in rows},
        "all_pass": all(r[3] == 1 for r in rows),
    }
    return _csv(rows, ["check", "points", "violations", "pass"]), summary


def _run_cover(manifest: ExperimentManifest, n: int, p: float) -> tuple[str, dict]:
    rep = charfn.interval_cover_check(n, p, manifest.gamma)
    rows = [[t, m] for t, m in rep.witnesses]
    summary = {
        "n": rep.n,
        "p": rep.p,
        "gamma": rep.gamma,
        "delta": rep.delta,
        "m_lo": rep.m_lo,
        "m_hi": rep.m_hi,
        "empty_intervals": rep.empty_intervals,
        "overlap_failures": rep.overlap_failures,
        "target": list(rep.target),
        "target_nonempty": rep.target_nonempty,
        "covered": rep.covered,
        "last_right_below_mid_cap": rep.last_right_below_mid_cap,
    }
    return _csv(rows, ["t", "witness_m"]), summary


def run(manifest: ExperimentManifest) -> list[str]:
    """Execute every parameter cell of the manifest; return output dirs."""
    manifest.validate()
    out_paths = []
    if manifest.kind == "toolbox-verify":
        body, summary = _run_toolbox_verify(manifest)
        out_paths.append(
            _write_outputs(_cell_dir(manifest), body, summary, manifest)
        )
        return out_paths
    for n in manifest.n_values:
        for p in manifest.p_values:
            if manifest.kind == "decoupling":
                for m in manifest.m_values or [1]:
                    body, summary = _run_decoupling(manifest, int(n), float(p), int(m))
                    out_paths.append(
                        _write_outputs(
                            _cell_dir(manifest, n=n, p=p, m=m), body, summary, manifest
                        )
                    )
                continue
            if manifest.kind == "pmf":
                body, summary = _run_pmf(manifest, int(n), float(p))
            elif manifest.kind == "charfn":
                body, summary = _run_charfn(manifest, int(n), float(p))
            elif manifest.kind == "distances":
                body, summary = _run_distances(manifest, int(n), float(p))
            elif manifest.kind == "cover-check":
                body, summary = _run_cover(manifest, int(n), float(p))
            out_paths.append(
                _write_outputs(_cell_dir(manifest, n=n, p=p), body, summary, manifest)
            )
    return out_paths
