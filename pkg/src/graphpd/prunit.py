"""Dominated-vertex pruning that preserves persistence diagrams.

A vertex u is dominated by a neighbor v when N[u] is contained in N[v]
(closed neighborhoods). Removing a dominated vertex folds the clique
complex onto a homotopy-equivalent subcomplex, so pruning changes no
diagram as long as the dominated vertex enters the filtration no earlier
than its dominator:

    sublevel    remove u when f(u) >= f(v)
    superlevel  remove u when f(u) <= f(v)
    power       remove u unconditionally (dimensions >= 1 preserved)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO

from .errors import InputError
from .graph import Graph

MODES = ("sublevel", "superlevel", "power")


@dataclass(frozen=True)
class PruneTrace:
    """Audit trail of one pruning run: every removal, in order.

    `removals` holds (pruned_id, dominator_id, pass_index) with passes
    numbered from 1; `passes` counts completed sweeps including the final
    empty one that proves the fixpoint.
    """

    removals: tuple[tuple[int, int, int], ...]
    passes: int

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, v, _ in self.removals)

    def __len__(self) -> int:
        return len(self.removals)

    def write_csv(self, fh: IO[str]) -> None:
        w = csv.writer(fh)
        w.writerow(["pruned_id", "dominator_id", "pass"])
        for u, v, p in self.removals:
            w.writerow([u, v, p])


def _check_mode(mode: str, f: dict[int, float] | None) -> None:
    if mode not in MODES:
        raise InputError(f"unknown prune mode {mode!r}; expected one of {MODES}")
    if mode == "power":
        if f is not None:
            raise InputError("power mode takes no vertex filter")
    elif f is None:
        raise InputError(f"{mode} mode requires a vertex filter")


def _check_filter(g: Graph, f: dict[int, float]) -> None:
    missing = [v for v in g.vertex_ids if v not in f]
    if missing:
        raise InputError(f"filter is missing {len(missing)} vertices, e.g. {missing[0]}")


def dominated_by(g: Graph, u: int, v: int) -> bool:
    """True iff N[u] is a subset of N[v] (closed neighborhoods).

    Implies u and v are adjacent. Merge-style scan over the two sorted
    adjacency lists; no adjacency matrix is formed.
    """
    if u == v:
        raise InputError("domination is only defined for distinct vertices")
    nu = g.neighbors(u)
    nv = g.neighbors(v)
    if len(nu) > len(nv):
        return False
    i = 0
    adjacent = False
    for w in nu:
        if w == v:
            adjacent = True
            continue
        while i < len(nv) and nv[i] < w:
            i += 1
        if i == len(nv) or nv[i] != w:
            return False
        i += 1
    return adjacent


def _condition(mode: str, f: dict[int, float] | None, u: int, v: int) -> bool:
    # filter condition for removing u in favor of dominator v
    if mode == "sublevel":
        return f[u] >= f[v]
    if mode == "superlevel":
        return f[u] <= f[v]
    return True


def find_prunable(
    g: Graph, f: dict[int, float] | None, mode: str
) -> list[tuple[int, int]]:
    """All pairs (u, v) where v dominates u and the mode's condition holds.

    Only neighbors of u are examined as candidate dominators. Pairs are
    listed with u ascending, then v ascending.
    """
    _check_mode(mode, f)
    if f is not None:
        _check_filter(g, f)
    out = []
    for u in g.vertex_ids:
        for v in g.neighbors(u):
            if _condition(mode, f, u, v) and dominated_by(g, u, v):
                out.append((u, v))
    return out


def prunit(
    g: Graph,
    f: dict[int, float] | None,
    mode: str,
    *,
    strict_pairs: bool = False,
) -> tuple[Graph, dict[int, float] | None, PruneTrace]:
    """Remove eligible dominated vertices until none remain.

    Sweeps vertices in ascending id order; each removal re-evaluates
    domination on the current, already-reduced graph, and passes repeat
    until one removes nothing, so runs are deterministic. Survivors keep
    their ORIGINAL filter values.

    When two vertices have equal closed neighborhoods (mutual domination)
    and the filter cannot order them, the larger id is removed and the
    smaller kept. `strict_pairs=True` instead skips mutual pairs entirely,
    which can only shrink the amount of reduction.
    """
    _check_mode(mode, f)
    if f is not None:
        _check_filter(g, f)

    adj: dict[int, set[int]] = {v: set(g.neighbors(v)) for v in g.vertex_ids}
    removals: list[tuple[int, int, int]] = []
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for u in sorted(adj):
            if u not in adj:
                continue
            adj_u = adj[u]
            du = len(adj_u)
            dominator = None
            for v in sorted(adj_u):
                adj_v = adj[v]
                if len(adj_v) < du:
                    continue
                if not _condition(mode, f, u, v):
                    continue
                if not all(w == v or w in adj_v for w in adj_u):
                    continue
                if len(adj_v) == du:
                    # equal closed neighborhoods: both directions dominate
                    if strict_pairs:
                        continue
                    if (mode == "power" or f[u] == f[v]) and u < v:
                        continue  # keep the smaller id
                dominator = v
                break
            if dominator is not None:
                for w in adj_u:
                    adj[w].discard(u)
                del adj[u]
                removals.append((u, dominator, passes))
                changed = True

    reduced = g.induced_subgraph(adj)
    restricted = None if f is None else {v: f[v] for v in reduced.vertex_ids}
    return reduced, restricted, PruneTrace(tuple(removals), passes)
