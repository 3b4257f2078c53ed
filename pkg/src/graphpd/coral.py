"""k-core decomposition and the core-based reduction.

Higher persistence diagrams of a vertex-filtered graph depend only on its
higher cores: the j-th diagram is unchanged when the graph is replaced by
its (j+1)-core, provided surviving vertices keep their original filter
values. `coral_reduce` implements exactly that contract.
"""

from __future__ import annotations

from .errors import InputError
from .graph import Graph


def _peel(g: Graph) -> tuple[dict[int, int], list[int]]:
    """Bucketed degree peeling: core numbers plus the peel order.

    Linear in |V| + |E|. The returned order lists vertices as they were
    peeled; reversing it gives a degeneracy ordering.
    """
    verts = list(g.vertex_ids)
    n = len(verts)
    if n == 0:
        return {}, []
    pos_of = {v: i for i, v in enumerate(verts)}
    deg = [g.degree(v) for v in verts]
    maxdeg = max(deg)

    # counting sort of vertices by degree, with per-degree bin starts
    bin_start = [0] * (maxdeg + 2)
    for d in deg:
        bin_start[d + 1] += 1
    for d in range(1, maxdeg + 2):
        bin_start[d] += bin_start[d - 1]
    order = [0] * n
    fill = bin_start[:maxdeg + 1]
    for i in range(n):
        d = deg[i]
        order[fill[d]] = i
        fill[d] += 1
    pos_in_order = [0] * n
    for p, i in enumerate(order):
        pos_in_order[i] = p

    core = [0] * n
    for p in range(n):
        i = order[p]
        core[i] = deg[i]
        for w in g.neighbors(verts[i]):
            j = pos_of[w]
            if deg[j] > deg[i]:
                # swap j to the front of its degree bin, then shrink the bin
                dj = deg[j]
                front = bin_start[dj]
                k = order[front]
                pj = pos_in_order[j]
                order[front], order[pj] = j, k
                pos_in_order[j], pos_in_order[k] = front, pj
                bin_start[dj] += 1
                deg[j] -= 1
    return {verts[i]: core[i] for i in range(n)}, [verts[i] for i in order]


def core_numbers(g: Graph) -> dict[int, int]:
    """Coreness of every vertex: the largest k whose k-core contains it."""
    core, _ = _peel(g)
    return core


def degeneracy_ordering(g: Graph) -> list[int]:
    """Vertex order in which each vertex has the fewest possible later neighbors.

    This is the reverse peel order of the bucket peeler; the maximum number
    of later neighbors equals the degeneracy of the graph.
    """
    _, order = _peel(g)
    return order


def degeneracy(g: Graph) -> int:
    """Maximum coreness over all vertices (0 for the empty graph)."""
    core = core_numbers(g)
    return max(core.values(), default=0)


def kcore(g: Graph, k: int) -> Graph:
    """Maximal induced subgraph in which every vertex has degree >= k.

    The k-core is unique, so the result is order-independent. Vertex ids
    are preserved; the result may be empty.
    """
    if k < 0:
        raise InputError(f"core index must be non-negative, got {k}")
    if k == 0:
        return g
    core = core_numbers(g)
    return g.induced_subgraph(v for v in g.vertex_ids if core[v] >= k)


def kcore_peeling(g: Graph, k: int) -> Graph:
    """k-core by naive iterative deletion of low-degree vertices.

    Reference implementation used as an oracle against the bucket peeler;
    prefer `kcore` in production paths.
    """
    if k < 0:
        raise InputError(f"core index must be non-negative, got {k}")
    alive = {v: set(g.neighbors(v)) for v in g.vertex_ids}
    while True:
        doomed = [v for v, ns in alive.items() if len(ns) < k]
        if not doomed:
            break
        for v in doomed:
            for w in alive[v]:
                alive[w].discard(v)
            del alive[v]
    return g.induced_subgraph(alive)


def coral_reduce(
    g: Graph, f: dict[int, float], k: int
) -> tuple[Graph, dict[int, float]]:
    """Reduce g for computing diagrams of dimension >= k, restricting the filter.

    For k >= 1 the result is the (k+1)-core: vertices of a k-cycle need
    degree k+1 among themselves, so lower-degree vertices cannot carry a
    class. Dimension 0 is the exception: every vertex carries a component,
    so no degree-based removal is safe and k = 0 returns g unchanged (an
    isolated vertex holds an infinite dimension-0 bar, yet the 1-core
    would drop it; on graphs with minimum degree >= 1 the 1-core is the
    identity anyway, so nothing is lost).

    Filter values are the ORIGINAL ones and are never recomputed on the
    reduced graph (a degree filter keeps degrees measured in g, not in the
    core).
    """
    if k < 0:
        raise InputError(f"target dimension must be non-negative, got {k}")
    missing = [v for v in g.vertex_ids if v not in f]
    if missing:
        raise InputError(f"filter is missing {len(missing)} vertices, e.g. {missing[0]}")
    if k == 0:
        return g, dict(f)
    reduced = kcore(g, k + 1)
    return reduced, {v: f[v] for v in reduced.vertex_ids}
