"""Reduction-exactness harness.

Everything needed to certify that a reduction changed no diagram: exact
multiset comparison of diagrams, seeded random graphs, an independent
brute-force persistence oracle, and one verifier per reduction claim
(core reduction, the three pruning modes, and the combined pipeline).

Comparisons run under the drop-zero-pairs policy: pairs with equal birth
and death carry no topological content and are exactly where a graph and
its reduction are allowed to differ.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .coral import coral_reduce
from .errors import InputError
from .filtration import Filtration, build_power, build_sublevel, build_superlevel
from .graph import Graph, diameter
from .persistence import INF, PersistenceDiagram, compute_pd
from .prunit import prunit

DEFAULT_DIM_CAP = 2


# ---------------------------------------------------------------------------
# diagram comparison

def pd_equal(
    a: PersistenceDiagram,
    b: PersistenceDiagram,
    dims: tuple[int, ...] | list[int] | set[int],
    tol: float = 0.0,
) -> bool:
    """Exact multiset equality of two diagrams on the requested dimensions.

    With integer or rational filters every value on both sides originates
    from the same filter values, so the default is exact comparison; `tol`
    admits an absolute tolerance for externally supplied real filters.
    """
    if a.policy != b.policy:
        raise InputError(
            f"diagrams use different zero-pair policies ({a.policy} vs {b.policy})"
        )
    for k in dims:
        pa, pb = a.dimension(k), b.dimension(k)
        if tol == 0.0:
            if Counter(pa) != Counter(pb):
                return False
        else:
            if len(pa) != len(pb):
                return False
            for (b1, d1), (b2, d2) in zip(sorted(pa), sorted(pb)):
                if abs(b1 - b2) > tol:
                    return False
                if (d1 == INF) != (d2 == INF):
                    return False
                if d1 != INF and abs(d1 - d2) > tol:
                    return False
    return True


# ---------------------------------------------------------------------------
# seeded random graphs

def random_graph(n: int, p: float, seed: int) -> Graph:
    """Seeded G(n, p) on vertices 0..n-1.

    Drawn from a PCG64 stream, one uniform per vertex pair in
    lexicographic order, so the same (n, p, seed) yields the same graph on
    every platform.
    """
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0:
        raise InputError(f"vertex count must be >= 0, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    m = n * (n - 1) // 2
    mask = rng.random(m) < p
    edges = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(range(n), edges)


def connected_random_graph(n: int, p: float, seed: int, attempts: int = 200) -> Graph:
    """First connected G(n, p) along the deterministic seed ladder seed, seed+1e4, ..."""
    from .graph import connected_components

    for t in range(attempts):
        g = random_graph(n, p, seed + 10_000 * t)
        if len(connected_components(g)) == 1 and n > 0:
            return g
    raise InputError(
        f"no connected G({n}, {p}) found within {attempts} attempts from seed {seed}"
    )


def er_corpus(
    count: int = 200,
    n_range: tuple[int, int] = (8, 30),
    ps: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5),
    seed0: int = 0,
) -> list[tuple[str, Graph]]:
    """Deterministic sweep of ER instances cycling through sizes and densities."""
    lo, hi = n_range
    span = hi - lo + 1
    out = []
    for i in range(count):
        n = lo + i % span
        p = ps[(i // span) % len(ps)]
        seed = seed0 + i
        out.append((f"er(n={n},p={p},seed={seed})", random_graph(n, p, seed)))
    return out


def degree_filter(g: Graph) -> dict[int, float]:
    return {v: float(g.degree(v)) for v in g.vertex_ids}


# ---------------------------------------------------------------------------
# brute-force oracle: persistence from explicit GF(2) rank computations

def _gf2_rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    m = m.copy()
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(m[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + pivots[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        hits = np.nonzero(m[:, c])[0]
        hits = hits[hits != r]
        m[hits] ^= m[r]
        r += 1
    return r


def _gf2_nullspace(m: np.ndarray) -> np.ndarray:
    """Columns spanning the null space of m over GF(2)."""
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    work = m.copy()
    pivot_col_of_row: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(work[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + pivots[0]
        if p != r:
            work[[r, p]] = work[[p, r]]
        hits = np.nonzero(work[:, c])[0]
        hits = hits[hits != r]
        work[hits] ^= work[r]
        pivot_col_of_row.append(c)
        r += 1
    pivot_cols = set(pivot_col_of_row)
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    basis = np.zeros((cols, len(free_cols)), dtype=np.uint8)
    for i, fc in enumerate(free_cols):
        basis[fc, i] = 1
        for row, pc in enumerate(pivot_col_of_row):
            if work[row, fc]:
                basis[pc, i] = 1
    return basis


class _ChainData:
    """Dense boundary matrices of one filtration, grouped by dimension.

    Within each dimension, simplices are listed in birth order, so the
    sub-complex at threshold step i is a prefix in every dimension.
    """

    def __init__(self, filt: Filtration, max_hom_dim: int):
        top = max_hom_dim + 1
        by_dim: dict[int, list[tuple[tuple[int, ...], int]]] = {
            d: [] for d in range(top + 1)
        }
        for s, b in filt.simplices:
            d = len(s) - 1
            if d <= top:
                by_dim[d].append((s, b))
        self.births = {d: [b for _, b in sims] for d, sims in by_dim.items()}
        index = {
            d: {s: i for i, (s, _) in enumerate(sims)} for d, sims in by_dim.items()
        }
        self.boundary: dict[int, np.ndarray] = {}
        for d in range(1, top + 1):
            rows = len(by_dim[d - 1])
            cols = len(by_dim[d])
            mat = np.zeros((rows, cols), dtype=np.uint8)
            for j, (s, _) in enumerate(by_dim[d]):
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    mat[index[d - 1][face], j] = 1
            self.boundary[d] = mat

    def counts_at(self, d: int, step: int) -> int:
        births = self.births.get(d, [])
        lo, hi = 0, len(births)
        while lo < hi:
            mid = (lo + hi) // 2
            if births[mid] <= step:
                lo = mid + 1
            else:
                hi = mid
        return lo


def oracle_pd(filt: Filtration, max_hom_dim: int) -> PersistenceDiagram:
    """Persistence diagram assembled purely from GF(2) rank computations.

    For every pair of threshold steps i <= j and every dimension, the rank
    of the inclusion-induced map on homology is computed from dense
    boundary matrices (cycle space at step i, boundary space at step j).
    Bar multiplicities then follow by inclusion-exclusion over the grid of
    those ranks. No column pairing is performed anywhere, which keeps this
    implementation independent of the production engine. Quadratic in the
    number of thresholds and cubic in simplex counts: for small inputs only.
    """
    if max_hom_dim < 0:
        raise InputError(f"max_hom_dim must be >= 0, got {max_hom_dim}")
    if filt.maxdim < max_hom_dim + 1:
        raise InputError(
            f"filtration caps dimension at {filt.maxdim}; the oracle for PD_{max_hom_dim} "
            f"needs simplices up to dimension {max_hom_dim + 1}"
        )
    m = len(filt.thresholds)
    if filt.direction == "superlevel":
        values = [-t for t in filt.thresholds]
    else:
        values = list(filt.thresholds)
    chains = _ChainData(filt, max_hom_dim)
    out: dict[int, list[tuple[float, float]]] = {k: [] for k in range(max_hom_dim + 1)}

    for k in range(max_hom_dim + 1):
        n_k = [chains.counts_at(k, i) for i in range(m)]
        n_k1 = [chains.counts_at(k + 1, i) for i in range(m)]
        bd_k = chains.boundary.get(k, None)
        bd_k1 = chains.boundary[k + 1] if k + 1 in chains.boundary else None

        cycle_basis: list[np.ndarray] = []
        for i in range(m):
            if k == 0:
                cycle_basis.append(np.eye(n_k[i], dtype=np.uint8))
            else:
                n_km1 = chains.counts_at(k - 1, i)
                cycle_basis.append(_gf2_nullspace(bd_k[:n_km1, : n_k[i]]))

        # closure makes rows past n_k[j] zero for columns born by step j,
        # so the boundary-space dimension depends on j alone
        bound_dim = [
            0 if bd_k1 is None else _gf2_rank(bd_k1[:, : n_k1[j]]) for j in range(m)
        ]

        def beta(i: int, j: int) -> int:
            # rank of H_k(step i) -> H_k(step j)
            if i < 0:
                return 0
            z = cycle_basis[i]
            dim_z = z.shape[1]
            if dim_z == 0:
                return 0
            if bd_k1 is None or n_k1[j] == 0:
                return dim_z
            bmat = bd_k1[: n_k[j], : n_k1[j]]
            z_pad = np.zeros((n_k[j], dim_z), dtype=np.uint8)
            z_pad[: z.shape[0], :] = z
            dim_sum = _gf2_rank(np.concatenate([z_pad, bmat], axis=1))
            # dim(Z_i ∩ B_j) = dim Z_i + dim B_j - dim(Z_i + B_j)
            return dim_z - (dim_z + bound_dim[j] - dim_sum)

        table = {}
        for i in range(m):
            for j in range(i, m):
                table[(i, j)] = beta(i, j)

        def tab(i: int, j: int) -> int:
            if i < 0:
                return 0
            return table[(i, j)]

        for b in range(m):
            for d in range(b + 1, m):
                mult = (tab(b, d - 1) - tab(b, d)) - (tab(b - 1, d - 1) - tab(b - 1, d))
                out[k].extend([(values[b], values[d])] * mult)
            essential = tab(b, m - 1) - tab(b - 1, m - 1)
            out[k].extend([(values[b], math.inf)] * essential)

    return PersistenceDiagram.from_pairs(out, "drop")


# ---------------------------------------------------------------------------
# verification of the reduction claims

@dataclass
class VerificationReport:
    """Outcome of one reduction-exactness check on one graph."""

    graph: str
    mode: str
    dims: tuple[int, ...]
    passed: dict[int, bool]
    counterexample: dict | None = None
    reduction: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_json_obj(self) -> dict:
        obj = {
            "graph": self.graph,
            "mode": self.mode,
            "dims": list(self.dims),
            "passed": {str(k): v for k, v in self.passed.items()},
            "ok": self.ok,
            "reduction": self.reduction,
        }
        if self.counterexample is not None:
            obj["counterexample"] = self.counterexample
        return obj


def _counterexample(
    g: Graph, f: dict[int, float] | None, k: int,
    before: PersistenceDiagram, after: PersistenceDiagram,
) -> dict:
    return {
        "dim": k,
        "edges": [list(e) for e in g.edges()],
        "vertices": list(g.vertex_ids),
        "filter": None if f is None else {str(v): f[v] for v in sorted(f)},
        "before": before.to_json_obj(),
        "after": after.to_json_obj(),
    }


def _compare(
    name: str, mode: str, g: Graph, f: dict[int, float] | None,
    dims: tuple[int, ...],
    before: PersistenceDiagram, after: PersistenceDiagram,
    reduction: dict,
) -> VerificationReport:
    passed = {k: pd_equal(before, after, (k,)) for k in dims}
    ce = None
    for k in dims:
        if not passed[k]:
            ce = _counterexample(g, f, k, before, after)
            break
    return VerificationReport(name, mode, dims, passed, ce, reduction)


def _reduction_stats(g: Graph, h: Graph) -> dict:
    return {
        "vertices_before": g.num_vertices,
        "vertices_after": h.num_vertices,
        "edges_before": g.num_edges,
        "edges_after": h.num_edges,
    }


def verify_coral(
    g: Graph,
    f: dict[int, float],
    j: int,
    cap: int = DEFAULT_DIM_CAP,
    name: str = "graph",
    fault_seed: int | None = None,
) -> VerificationReport:
    """Check PD_d(g) == PD_d of the (j+1)-core for every d in j..cap."""
    if j < 0:
        raise InputError(f"homology dimension must be >= 0, got {j}")
    cap = max(cap, j)
    dims = tuple(range(j, cap + 1))
    before = compute_pd(build_sublevel(g, f, cap + 1), cap)
    h, fh = coral_reduce(g, f, j)
    if fault_seed is not None:
        h = _drop_extra_vertex(h, fault_seed)
        fh = {v: fh[v] for v in h.vertex_ids}
    after = compute_pd(build_sublevel(h, fh, cap + 1), cap)
    return _compare(
        name, f"coral(j={j})", g, f, dims, before, after, _reduction_stats(g, h)
    )


def _drop_extra_vertex(h: Graph, seed: int) -> Graph:
    """Negative control: delete one deterministic 'random' surviving vertex."""
    if h.num_vertices == 0:
        return h
    rng = np.random.Generator(np.random.PCG64(seed))
    victim = h.vertex_ids[int(rng.integers(h.num_vertices))]
    return h.induced_subgraph(v for v in h.vertex_ids if v != victim)


def verify_prunit(
    g: Graph,
    f: dict[int, float] | None,
    mode: str,
    cap: int = DEFAULT_DIM_CAP,
    name: str = "graph",
    fault_seed: int | None = None,
) -> VerificationReport:
    """Check that pruning preserved the diagrams for `mode`.

    Sublevel and superlevel are compared on dimensions 0..cap; power on
    1..cap (dimension 0 is genuinely changed by pruning there). With
    `fault_seed`, one extra non-dominated vertex is deleted after pruning,
    which should break equality on graphs with nontrivial diagrams.
    """
    h, fh, trace = prunit(g, f, mode)
    if fault_seed is not None:
        h = _drop_extra_vertex(h, fault_seed)
        if fh is not None:
            fh = {v: fh[v] for v in h.vertex_ids}
    if mode == "sublevel":
        dims = tuple(range(0, cap + 1))
        before = compute_pd(build_sublevel(g, f, cap + 1), cap)
        after = compute_pd(build_sublevel(h, fh, cap + 1), cap)
    elif mode == "superlevel":
        dims = tuple(range(0, cap + 1))
        before = compute_pd(build_superlevel(g, f, cap + 1), cap)
        after = compute_pd(build_superlevel(h, fh, cap + 1), cap)
    elif mode == "power":
        dims = tuple(range(1, cap + 1))
        max_power = max(1, diameter(g))
        before = compute_pd(build_power(g, cap + 1, max_power), cap)
        after = compute_pd(build_power(h, cap + 1, max_power), cap)
    else:
        raise InputError(f"unknown prune mode {mode!r}")
    stats = _reduction_stats(g, h)
    stats["pruned"] = len(trace)
    stats["passes"] = trace.passes
    return _compare(name, f"prunit-{mode}", g, f, dims, before, after, stats)


def verify_combined(
    g: Graph,
    f: dict[int, float],
    k: int,
    cap: int = DEFAULT_DIM_CAP,
    name: str = "graph",
    fault_seed: int | None = None,
) -> VerificationReport:
    """Check the pipeline prune-then-core: PD_d(g) == PD_d((g')^{k+1}), d >= k."""
    if k < 0:
        raise InputError(f"homology dimension must be >= 0, got {k}")
    cap = max(cap, k)
    dims = tuple(range(k, cap + 1))
    before = compute_pd(build_sublevel(g, f, cap + 1), cap)
    h1, f1, trace = prunit(g, f, "sublevel")
    h2, f2 = coral_reduce(h1, f1, k)
    if fault_seed is not None:
        h2 = _drop_extra_vertex(h2, fault_seed)
        f2 = {v: f2[v] for v in h2.vertex_ids}
    after = compute_pd(build_sublevel(h2, f2, cap + 1), cap)
    stats = _reduction_stats(g, h2)
    stats["pruned"] = len(trace)
    return _compare(name, f"combined(k={k})", g, f, dims, before, after, stats)
