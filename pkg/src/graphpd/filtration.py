"""Clique-complex filtrations of vertex-filtered graphs.

A filtration is a flat list of simplices, each stamped with the index of
the threshold at which it first appears. Simplices are kept in canonical
order: ascending (birth_index, dimension, lexicographic vertex tuple),
which is also the input order expected by the persistence engine.

Directions:
    sublevel    thresholds ascend; a simplex is born at the max of its
                vertices' filter values
    superlevel  thresholds DESCEND; a simplex is born at the min of its
                vertices' filter values
    power       thresholds are 0..max_power; a clique of the n-th graph
                power is born at its maximum pairwise graph distance
"""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Iterable
from dataclasses import dataclass
from typing import IO

from .coral import degeneracy_ordering
from .errors import ClosureError, InputError
from .graph import Graph, bfs_distances, graph_power

Simplex = tuple[int, ...]

DIRECTIONS = ("sublevel", "superlevel", "power")


@dataclass(frozen=True)
class Filtration:
    """An ordered clique complex: thresholds plus (simplex, birth_index) pairs.

    `thresholds` is stored in filtration order (descending for superlevel)
    and `simplices` in canonical order. Every face of every simplex is
    present with a birth index no later than the simplex itself.
    """

    direction: str
    thresholds: tuple[float, ...]
    simplices: tuple[tuple[Simplex, int], ...]
    maxdim: int

    def counts_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s, _ in self.simplices:
            d = len(s) - 1
            out[d] = out.get(d, 0) + 1
        return out

    def __len__(self) -> int:
        return len(self.simplices)

    def validate(self) -> None:
        """Check the closure invariant; raises ClosureError on violation."""
        birth: dict[Simplex, int] = {}
        for s, b in self.simplices:
            birth[s] = b
        for s, b in self.simplices:
            if len(s) == 1:
                continue
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                fb = birth.get(face)
                if fb is None:
                    raise ClosureError(f"face {face} of {s} is missing")
                if fb > b:
                    raise ClosureError(
                        f"face {face} born at index {fb}, after its coface {s} at {b}"
                    )

    def write_text(self, fh: IO[str]) -> None:
        """One simplex per line: 'birth_value v0 v1 ... vk', canonical order."""
        for s, b in self.simplices:
            val = self.thresholds[b]
            fh.write(f"{val:g} " + " ".join(str(v) for v in s) + "\n")


def thresholds_of(f: dict[int, float], step: float | None = None) -> list[float]:
    """Threshold set for a vertex filter.

    Default is the sorted distinct filter values (finest granularity).
    With `step`, a coarser grid min, min+step, ... is returned, extended
    until it covers the maximum value.
    """
    if not f:
        raise InputError("cannot derive thresholds from an empty filter")
    values = sorted(set(f.values()))
    if step is None:
        return values
    if step <= 0:
        raise InputError(f"threshold step must be positive, got {step}")
    lo, hi = values[0], values[-1]
    grid = [lo]
    while grid[-1] < hi:
        grid.append(lo + len(grid) * step)
    return grid


def enumerate_cliques(g: Graph, max_size: int) -> list[Simplex]:
    """All cliques of g with 1..max_size vertices, each exactly once.

    Recursive extension along a degeneracy ordering: a clique is only ever
    grown by common neighbors that come later in the ordering, which makes
    the enumeration output-sensitive and duplicate-free. Cliques come out
    as ascending vertex tuples.
    """
    if max_size < 1:
        raise InputError(f"max clique size must be >= 1, got {max_size}")
    order = degeneracy_ordering(g)
    rank = {v: i for i, v in enumerate(order)}
    adjset = {v: set(g.neighbors(v)) for v in g.vertex_ids}
    out: list[Simplex] = []

    def extend(clique: tuple[int, ...], cands: list[int]) -> None:
        out.append(tuple(sorted(clique)))
        if len(clique) == max_size:
            return
        for i, u in enumerate(cands):
            au = adjset[u]
            extend(clique + (u,), [w for w in cands[i + 1:] if w in au])

    for v in order:
        later = sorted((u for u in g.neighbors(v) if rank[u] > rank[v]),
                       key=rank.__getitem__)
        extend((v,), later)
    return out


def _check_cover(g: Graph, f: dict[int, float]) -> None:
    missing = [v for v in g.vertex_ids if v not in f]
    if missing:
        raise InputError(f"filter is missing {len(missing)} vertices, e.g. {missing[0]}")


def _canonical(simplices: Iterable[tuple[Simplex, int]]) -> tuple[tuple[Simplex, int], ...]:
    return tuple(sorted(simplices, key=lambda sb: (sb[1], len(sb[0]), sb[0])))


def build_sublevel(
    g: Graph, f: dict[int, float], maxdim: int, step: float | None = None
) -> Filtration:
    """Sublevel clique filtration: complexes grow as the threshold rises.

    A simplex is born at the largest filter value among its vertices; with
    a coarsening `step` it is assigned to the smallest grid threshold at
    or above that value. Cliques are enumerated up to maxdim+1 vertices,
    so closure holds by construction.
    """
    if maxdim < 0:
        raise InputError(f"maxdim must be >= 0, got {maxdim}")
    _check_cover(g, f)
    if g.num_vertices == 0:
        return Filtration("sublevel", (), (), maxdim)
    thresholds = thresholds_of({v: f[v] for v in g.vertex_ids}, step)
    if step is None:
        index_of = {val: i for i, val in enumerate(thresholds)}.__getitem__
    else:
        def index_of(val: float) -> int:
            i = bisect_left(thresholds, val)
            if i == len(thresholds):
                raise InputError(f"birth value {val} exceeds the threshold grid")
            return i
    simplices = []
    for s in enumerate_cliques(g, maxdim + 1):
        simplices.append((s, index_of(max(f[v] for v in s))))
    return Filtration("sublevel", tuple(thresholds), _canonical(simplices), maxdim)


def build_superlevel(
    g: Graph, f: dict[int, float], maxdim: int, step: float | None = None
) -> Filtration:
    """Superlevel clique filtration: complexes grow as the threshold falls.

    Thresholds are stored in descending order so birth indices stay
    monotone along the filtration sequence; a simplex is born at the
    smallest filter value among its vertices.
    """
    if maxdim < 0:
        raise InputError(f"maxdim must be >= 0, got {maxdim}")
    _check_cover(g, f)
    if g.num_vertices == 0:
        return Filtration("superlevel", (), (), maxdim)
    ascending = thresholds_of({v: f[v] for v in g.vertex_ids}, step)
    thresholds = list(reversed(ascending))
    if step is None:
        index_of = {val: i for i, val in enumerate(thresholds)}.__getitem__
    else:
        def index_of(val: float) -> int:
            # largest grid value <= val, i.e. the first descending threshold
            # at which the simplex is included
            i = bisect_left(ascending, val)
            if i == len(ascending) or ascending[i] != val:
                i -= 1
            if i < 0:
                raise InputError(f"birth value {val} falls below the threshold grid")
            return len(thresholds) - 1 - i
    simplices = []
    for s in enumerate_cliques(g, maxdim + 1):
        simplices.append((s, index_of(min(f[v] for v in s))))
    return Filtration("superlevel", tuple(thresholds), _canonical(simplices), maxdim)


def build_power(g: Graph, maxdim: int, max_power: int) -> Filtration:
    """Power filtration: vertices at step 0, then clique complexes of graph powers.

    A clique of graph_power(g, max_power) is born at its maximum pairwise
    graph distance, the smallest n at which all its vertices are mutually
    within distance n. Vertex pairs in different components never meet.
    """
    if maxdim < 0:
        raise InputError(f"maxdim must be >= 0, got {maxdim}")
    if max_power < 1:
        raise InputError(f"max power must be >= 1, got {max_power}")
    thresholds = tuple(float(i) for i in range(max_power + 1))
    if g.num_vertices == 0:
        return Filtration("power", thresholds, (), maxdim)
    dist = {v: bfs_distances(g, v, max_depth=max_power) for v in g.vertex_ids}
    pg = graph_power(g, max_power)
    simplices = []
    for s in enumerate_cliques(pg, maxdim + 1):
        if len(s) == 1:
            simplices.append((s, 0))
            continue
        birth = max(dist[u][w] for i, u in enumerate(s) for w in s[i + 1:])
        simplices.append((s, birth))
    return Filtration("power", thresholds, _canonical(simplices), maxdim)


def build(
    g: Graph,
    direction: str,
    f: dict[int, float] | None,
    maxdim: int,
    *,
    step: float | None = None,
    max_power: int | None = None,
) -> Filtration:
    """Dispatch to the builder for `direction`; power derives max_power from g."""
    if direction == "sublevel":
        return build_sublevel(g, f, maxdim, step)
    if direction == "superlevel":
        return build_superlevel(g, f, maxdim, step)
    if direction == "power":
        if f is not None:
            raise InputError("power filtration takes no vertex filter")
        if max_power is None:
            from .graph import diameter

            max_power = max(1, diameter(g))
        return build_power(g, maxdim, max_power)
    raise InputError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")
