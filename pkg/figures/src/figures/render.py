"""The three figure kinds.

Rendering configuration is pinned so byte-identical inputs give
byte-identical SVG output: fixed hashsalt, no date metadata, fonts
converted to paths.
"""

import math

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt

from .iodata import (
    FigureSpec,
    SchemaError,
    load_alpha,
    load_charfn,
    load_distance_report,
)

matplotlib.rcParams["svg.hashsalt"] = "gnplclt-figures"
matplotlib.rcParams["svg.fonttype"] = "path"

_BOUNDARY_STYLE = dict(color="0.4", linestyle=":", linewidth=0.8)


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_charfn(spec: FigureSpec) -> str:
    """|phi(t)| against t with regime boundaries and the mid bound overlaid."""
    if len(spec.inputs) != 1:
        raise SchemaError("charfn-regimes takes exactly one results.csv")
    data = load_charfn(spec.inputs[0])
    s = data.summary
    ts = [float(r["t"]) for r in data.rows]
    mods = [float(r["modulus"]) for r in data.rows]
    cis = [float(r["ci"]) for r in data.rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.errorbar(ts, mods, yerr=cis, fmt="o-", markersize=3, linewidth=0.9,
                label="|E exp(i t X*)|")

    sigma = float(s["sigma"])
    gamma = float(s["gamma"])
    boundaries = [
        (float(s["k_cut"]), "K"),
        (sigma / 2.0**12, "sigma/2^12"),
        (sigma / 2.0**10, "sigma/2^10"),
        (math.pi * sigma, "pi sigma"),
    ]
    t_max = max(ts)
    for x, label in boundaries:
        if 0.0 < x <= 1.05 * t_max:
            ax.axvline(x, **_BOUNDARY_STYLE)
            ax.annotate(label, (x, 1.0), rotation=90, fontsize=7,
                        ha="right", va="top")

    mid_lo = (2.0**21 * s["p"] ** 2 * s["n"]) ** (0.5 + gamma)
    mid_hi = sigma / 2.0**10
    mid_ts = [t for t in ts if mid_lo < t < mid_hi]
    if mid_ts:
        ax.plot(mid_ts, [math.exp(-(t ** (2 * gamma))) for t in mid_ts],
                "r--", linewidth=1.0, label="exp(-t^(2 gamma))")

    ax.set_xscale(spec.xscale)
    ax.set_yscale(spec.yscale)
    ax.set_xlabel("t")
    ax.set_ylabel("modulus")
    ax.set_title(f"n={s['n']}, p={s['p']}, gamma={gamma}")
    ax.legend(fontsize=8)
    _save(fig, spec.output)
    return spec.output


def plot_distance_trend(spec: FigureSpec) -> str:
    """sup-lattice and l1 distances against n, grouped by p, with the predicted slope."""
    if len(spec.inputs) < 2:
        raise SchemaError("distance-trend needs at least 2 report files")
    reports = sorted(
        (load_distance_report(path) for path in spec.inputs),
        key=lambda r: (r["p"], r["n"]),
    )
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    by_p: dict[float, list[dict]] = {}
    for rep in reports:
        by_p.setdefault(float(rep["p"]), []).append(rep)
    for p, group in sorted(by_p.items()):
        ns = [r["n"] for r in group]
        ax.plot(ns, [r["sup_lattice"] for r in group], "o-",
                label=f"sup lattice, p={p:g}")
        ax.plot(ns, [r["l1"] for r in group], "s--",
                label=f"l1, p={p:g}")
        eps = group[0]["epsilon"]
        ax.plot(ns, [n ** (-0.5 + eps) * math.sqrt(p) for n in ns], ":",
                color="0.3",
                label=f"n^(-1/2+{eps:g}) sqrt(p)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("distance")
    ax.legend(fontsize=8)
    _save(fig, spec.output)
    return spec.output


def plot_alpha_histogram(spec: FigureSpec) -> str:
    """Histogram of the per-trial |A'| / |A| ratios from a decoupling run."""
    if len(spec.inputs) != 1:
        raise SchemaError("alpha-histogram takes exactly one results.csv")
    data = load_alpha(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.hist(data.ratios, bins=30, color="C0", edgecolor="white")
    ax.axvline(1.0 / 2.0**7, color="r", linestyle="--",
               label="threshold 1/2^7")
    ax.set_xlabel("|A'| / |A|")
    ax.set_ylabel("trials")
    ax.set_title(f"m = {data.m}")
    ax.legend(fontsize=8)
    _save(fig, spec.output)
    return spec.output


RENDERERS = {
    "charfn-regimes": plot_charfn,
    "distance-trend": plot_distance_trend,
    "alpha-histogram": plot_alpha_histogram,
}


def render(spec: FigureSpec) -> str:
    return RENDERERS[spec.kind](spec)
