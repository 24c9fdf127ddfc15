"""Headless figure rendering for reports.

All functions write PNG files and import matplotlib lazily with the Agg
backend so no display is ever needed. Figures are illustrative; the exact
numbers stay in the text output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from .core import members
from .graphs import LabeledGraph
from .hardness import ReductionReport

__all__ = [
    "render_values_figure",
    "render_graph_figure",
    "render_hardness_figure",
]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_values_figure(
    values: Mapping[str, Sequence[Fraction]], path: str
) -> None:
    """Grouped bar chart of per-player values, one series per scheme."""
    plt = _pyplot()
    kinds = list(values)
    if not kinds:
        raise ValueError("nothing to plot")
    n = len(values[kinds[0]])
    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * n), 4.0))
    width = 0.8 / len(kinds)
    for idx, kind in enumerate(kinds):
        xs = [p + idx * width for p in range(n)]
        ax.bar(xs, [float(v) for v in values[kind]], width=width, label=kind)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks([p + 0.4 - width / 2 for p in range(n)])
    ax.set_xticklabels([str(p + 1) for p in range(n)])
    ax.set_xlabel("player")
    ax.set_ylabel("value")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_graph_figure(graph: LabeledGraph, path: str) -> None:
    """Node-link drawing on a circle, nodes annotated with their labels."""
    plt = _pyplot()
    k = graph.k
    coords = []
    for t in range(k):
        angle = 2.0 * math.pi * t / k - math.pi / 2.0
        coords.append((math.cos(angle), math.sin(angle)))
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for i, j in graph.edge_list():
        (x1, y1), (x2, y2) = coords[i - 1], coords[j - 1]
        ax.plot([x1, x2], [y1, y2], color="gray", zorder=1)
    for t in range(k):
        x, y = coords[t]
        ax.scatter([x], [y], s=700, color="white", edgecolors="black", zorder=2)
        players = ",".join(str(p) for p in members(graph.labels[t]))
        ax.annotate(
            f"v{t + 1}\n{{{players}}}",
            (x, y),
            ha="center",
            va="center",
            fontsize=8,
            zorder=3,
        )
    ax.set_xlim(-1.4, 1.4)
    ax.set_ylim(-1.4, 1.4)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_hardness_figure(report: ReductionReport, path: str) -> None:
    """Recovered and direct count vectors side by side."""
    plt = _pyplot()
    m = len(report.recovered)
    fig, ax = plt.subplots(figsize=(max(6.0, 1.0 * m), 4.0))
    xs = list(range(m))
    ax.bar(
        [x - 0.2 for x in xs],
        [float(v) for v in report.recovered],
        width=0.4,
        label="recovered",
    )
    ax.bar([x + 0.2 for x in xs], list(report.direct), width=0.4, label="direct")
    ax.set_xticks(xs)
    ax.set_xlabel("index")
    ax.set_ylabel("count")
    ax.set_title(report.target)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
