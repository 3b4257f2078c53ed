"""Reduction reports and the figures rendered next to them.

Every CLI report path writes machine-readable output (JSON/CSV) first;
the PNG renderings here are companions for eyeballing results, saved into
the same output directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .persistence import INF, PersistenceDiagram


def _pct(before: int, after: int) -> float:
    if before == 0:
        return 0.0
    return 100.0 * (before - after) / before


@dataclass
class ReductionReport:
    """Before/after sizes and per-phase wall-clock for one reduction run."""

    dataset: str
    mode: str
    vertices_before: int
    vertices_after: int
    edges_before: int
    edges_after: int
    simplices_before: int | None = None
    simplices_after: int | None = None
    reduce_ms: float = 0.0
    filtration_ms: float | None = None
    persistence_ms: float | None = None
    invocation: list[str] = field(default_factory=list)

    @property
    def vertex_reduction_pct(self) -> float:
        return _pct(self.vertices_before, self.vertices_after)

    @property
    def edge_reduction_pct(self) -> float:
        return _pct(self.edges_before, self.edges_after)

    @property
    def simplex_reduction_pct(self) -> float | None:
        if self.simplices_before is None or self.simplices_after is None:
            return None
        return _pct(self.simplices_before, self.simplices_after)

    def to_json_obj(self) -> dict:
        return {
            "dataset": self.dataset,
            "mode": self.mode,
            "vertices_before": self.vertices_before,
            "vertices_after": self.vertices_after,
            "vertex_reduction_pct": round(self.vertex_reduction_pct, 4),
            "edges_before": self.edges_before,
            "edges_after": self.edges_after,
            "edge_reduction_pct": round(self.edge_reduction_pct, 4),
            "simplices_before": self.simplices_before,
            "simplices_after": self.simplices_after,
            "simplex_reduction_pct": (
                None
                if self.simplex_reduction_pct is None
                else round(self.simplex_reduction_pct, 4)
            ),
            "timings_ms": {
                "reduce": round(self.reduce_ms, 3),
                "filtration": (
                    None if self.filtration_ms is None else round(self.filtration_ms, 3)
                ),
                "persistence": (
                    None if self.persistence_ms is None else round(self.persistence_ms, 3)
                ),
            },
            "invocation": self.invocation,
        }


def render_reduction_figure(report: ReductionReport, path: Path) -> None:
    """Grouped before/after bars for vertices, edges and (optionally) simplices."""
    groups = [
        ("vertices", report.vertices_before, report.vertices_after),
        ("edges", report.edges_before, report.edges_after),
    ]
    if report.simplices_before is not None and report.simplices_after is not None:
        groups.append(("simplices", report.simplices_before, report.simplices_after))
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(groups))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], [g[1] for g in groups], width, label="before")
    ax.bar([x + width / 2 for x in xs], [g[2] for g in groups], width, label="after")
    for x, (label, before, after) in zip(xs, groups):
        ax.text(x, max(before, after), f"-{_pct(before, after):.0f}%",
                ha="center", va="bottom", fontsize=9)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([g[0] for g in groups])
    ax.set_ylabel("count")
    ax.set_title(f"{report.dataset}: {report.mode}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_diagram_figure(pd: PersistenceDiagram, path: Path, title: str = "") -> None:
    """Scatter of (birth, death) pairs; infinite deaths drawn on a dashed top line."""
    fig, ax = plt.subplots(figsize=(5, 5))
    finite = [
        (b, d) for k in pd.dimensions for b, d in pd.dimension(k) if d != INF
    ]
    all_births = [b for k in pd.dimensions for b, _ in pd.dimension(k)]
    lo = min(all_births, default=0.0)
    hi = max([d for _, d in finite], default=max(all_births, default=1.0))
    if hi == lo:
        hi = lo + 1.0
    pad = 0.08 * (hi - lo)
    top = hi + 2 * pad
    for k in pd.dimensions:
        pts = pd.dimension(k)
        xs = [b for b, _ in pts]
        ys = [top if d == INF else d for _, d in pts]
        ax.scatter(xs, ys, label=f"dim {k}", alpha=0.75, s=24)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], "k-", linewidth=0.8)
    ax.axhline(top, color="gray", linestyle="--", linewidth=0.8)
    ax.text(lo - pad, top, " inf", va="bottom", fontsize=8, color="gray")
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    if title:
        ax.set_title(title)
    if pd.dimensions:
        ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_clustering_betti_figure(
    rows: list[tuple[str, float, int, int]], path: Path
) -> None:
    """Scatter of clustering coefficient against higher Betti numbers."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4), sharex=True)
    cc = [r[1] for r in rows]
    for ax, idx, label in ((axes[0], 2, "Betti 2"), (axes[1], 3, "Betti 3")):
        ax.scatter(cc, [r[idx] for r in rows], alpha=0.6, s=20)
        ax.set_xlabel("clustering coefficient")
        ax.set_ylabel(label)
    fig.suptitle("clustering coefficient vs. higher topological features")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_kahle_figure(
    rows: list[tuple[int, float, int, int, int]], path: Path
) -> None:
    """Fraction of seeds with nontrivial Betti_2, per (n, p) cell."""
    cells: dict[tuple[int, float], list[int]] = {}
    for n, p, _seed, _betti2, nontrivial in rows:
        cells.setdefault((n, p), []).append(nontrivial)
    keys = sorted(cells)
    fracs = [sum(cells[k]) / len(cells[k]) for k in keys]
    labels = [f"n={n}\np={p:g}" for n, p in keys]
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(keys)), 4))
    ax.bar(range(len(keys)), fracs)
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylim(0, 1)
    ax.set_ylabel("fraction of seeds with nontrivial Betti 2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
