"""Figure rendering for graphs, sweeps, audits and implication chains.

Everything draws onto a fresh figure with the Agg backend and writes it to
a file; the format follows the path suffix (png, pdf, svg).
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import FancyArrowPatch  # noqa: E402

from .admissibility import AdmissibilityReport  # noqa: E402
from .graph import LabeledGraph  # noqa: E402
from .sweep import SweepReport  # noqa: E402

COLUMN = {"A": 0, "B": 1, "Cfixed": 2, "C": 2}
ROLE_COLOUR = {"A": "#4c72b0", "B": "#dd8452", "Cfixed": "#55a868", "C": "#55a868"}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight", dpi=150, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def layout(g: LabeledGraph) -> dict:
    """Three columns (A, B, C side) with vertices spread evenly top to bottom."""
    columns = defaultdict(list)
    for v in g.labels:
        columns[COLUMN[v.role]].append(v)
    tallest = max(len(c) for c in columns.values())
    pos = {}
    for x, members in columns.items():
        gap = tallest / (len(members) + 1)
        for i, v in enumerate(members):
            pos[v] = (1.5 * x, tallest - gap * (i + 1))
    return pos


def draw_graph(g: LabeledGraph, path, title: str = "", highlight=()) -> Path:
    """Draw ``g`` with the column layout; ``highlight`` vertices get a thick ring."""
    pos = layout(g)
    fig, ax = plt.subplots(figsize=(5, max(3, 0.55 * len(pos) ** 0.9)))
    for u, v in g.edges():
        (x1, y1), (x2, y2) = pos[u], pos[v]
        rad = 0.35 if x1 == x2 else 0.0
        ax.add_patch(FancyArrowPatch((x1, y1), (x2, y2), arrowstyle="-", connectionstyle=f"arc3,rad={rad}",
                                     color="0.55", lw=0.9, zorder=1))
    marked = {str(x) for x in highlight}
    for v, (x, y) in pos.items():
        ring = 2.5 if str(v) in marked else 0.8
        ax.scatter([x], [y], s=380, color=ROLE_COLOUR[v.role], edgecolors="black", linewidths=ring, zorder=2)
        ax.annotate(str(v), (x, y), ha="center", va="center", color="white", fontsize=8, weight="bold", zorder=3)
    ax.set_title(title or f"{g.n} vertices, {g.edge_count} edges")
    ax.set_axis_off()
    ax.margins(0.15)
    return _save(fig, path)


def plot_sweep(report: SweepReport, path) -> Path:
    """One bar group per vertex set: connected subsets, Palfy-settled, residue."""
    rows = report.rows
    fig, ax = plt.subplots(figsize=(max(5, 0.5 * len(rows) + 2), 4))
    xs = range(len(rows))
    width = 0.28
    series = [("connected", [r.connected for r in rows], "#4c72b0"),
              ("Palfy", [r.palfy for r in rows], "#55a868"),
              ("residue", [r.residue for r in rows], "#c44e52")]
    for i, (name, values, colour) in enumerate(series):
        ax.bar([x + (i - 1) * width for x in xs], [max(v, 0.8) for v in values], width, label=name, color=colour)
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(["{" + ",".join(r.vertex_set) + "}" for r in rows], rotation=70, fontsize=6, ha="right")
    ax.set_ylabel("count")
    status = "no residue left" if report.ok else f"{len(report.uncertified)} uncertified"
    ax.set_title(f"{report.instance} [{report.mode}]: {status}")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_audit(report: AdmissibilityReport, path) -> Path:
    """Obligation counts per condition, split by the rule that settled them."""
    counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for ob in report.obligations:
        rule = ob.verdict.rule or ob.verdict.status.value
        counts[ob.condition][rule] += 1 + ob.inherited
    conditions = sorted(counts)
    rules = sorted({r for c in counts.values() for r in c})
    fig, ax = plt.subplots(figsize=(5, 3.5))
    bottom = [0] * len(conditions)
    for rule in rules:
        vals = [counts[c].get(rule, 0) for c in conditions]
        ax.bar(conditions, vals, bottom=bottom, label=rule)
        bottom = [b + v for b, v in zip(bottom, vals)]
    ax.set_xlabel("condition")
    ax.set_ylabel("subgraphs")
    ax.set_title(f"{report.vertex}: {report.level.value}")
    if rules:
        ax.legend(fontsize=7)
    return _save(fig, path)


def plot_implications(edges, path, labels: dict | None = None) -> Path:
    """Layered drawing of a (premise, conclusion) DAG, longest-path layering."""
    labels = labels or {}
    nodes = sorted({x for e in edges for x in e})
    preds = defaultdict(set)
    for a, b in edges:
        preds[b].add(a)
    depth: dict[str, int] = {}

    def level(n: str) -> int:
        if n not in depth:
            depth[n] = 1 + max((level(p) for p in preds[n]), default=-1)
        return depth[n]

    layers = defaultdict(list)
    for n in nodes:
        layers[level(n)].append(n)
    pos = {}
    for d, members in layers.items():
        for i, n in enumerate(members):
            pos[n] = (d * 2.2, -i)
    height = max((len(m) for m in layers.values()), default=1)
    fig, ax = plt.subplots(figsize=(2.2 * len(layers) + 1, 0.5 * height + 1.5))
    for a, b in edges:
        ax.add_patch(FancyArrowPatch(pos[a], pos[b], arrowstyle="-|>", mutation_scale=12, color="0.6", lw=0.6,
                                     shrinkA=14, shrinkB=14, zorder=1))
    for n, (x, y) in pos.items():
        colour = "#dd8452" if n.startswith("gamma") else "#c6dbef"
        ax.annotate(labels.get(n, n), (x, y), ha="center", va="center", fontsize=7, zorder=2,
                    bbox={"boxstyle": "round", "fc": colour, "ec": "0.3"})
    ax.set_xlim(-1.2, 2.2 * max(layers, default=0) + 1.2)
    ax.set_ylim(-height, 1)
    ax.set_axis_off()
    return _save(fig, path)
