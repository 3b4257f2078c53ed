"""Persistence diagrams over the two-element field.

The engine runs the standard left-to-right boundary-matrix column
reduction, by default with the clearing optimization (columns of
dimension k are skipped once a pivot found in dimension k+1 proves they
reduce to zero). Columns are kept as integer bitmasks, so column addition
is a single XOR.

Diagram values live on the threshold-value scale. Superlevel diagrams
are reported on the negated axis (a feature spanning filter values
5 -> 3 becomes the pair (-5, -3)), which keeps birth <= death in every
direction and makes superlevel output comparable with a sublevel run on
the negated filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ClosureError, InputError
from .filtration import Filtration, Simplex

INF = math.inf


@dataclass(frozen=True)
class PersistenceDiagram:
    """Per-dimension multiset of (birth, death) pairs, death possibly inf.

    Pairs are kept sorted within each dimension so equal diagrams compare
    equal structurally; `policy` records whether zero-persistence pairs
    (birth == death on the value scale) were dropped or kept.
    """

    pairs: dict[int, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    policy: str = "drop"

    def dimension(self, k: int) -> tuple[tuple[float, float], ...]:
        return self.pairs.get(k, ())

    @property
    def dimensions(self) -> list[int]:
        return sorted(self.pairs)

    def infinite_count(self, k: int) -> int:
        return sum(1 for _, d in self.dimension(k) if d == INF)

    def total_pairs(self) -> int:
        return sum(len(p) for p in self.pairs.values())

    def to_json_obj(self) -> dict:
        return {
            "policy": self.policy,
            "dims": {
                str(k): [[b, "inf" if d == INF else d] for b, d in self.dimension(k)]
                for k in self.dimensions
            },
        }

    def to_csv_rows(self) -> list[tuple[int, float, str | float]]:
        rows: list[tuple[int, float, str | float]] = []
        for k in self.dimensions:
            for b, d in self.dimension(k):
                rows.append((k, b, "inf" if d == INF else d))
        return rows

    @staticmethod
    def from_pairs(
        raw: dict[int, list[tuple[float, float]]], policy: str = "drop"
    ) -> PersistenceDiagram:
        # empty dimensions are not stored, so diagrams from different
        # sources compare equal structurally
        return PersistenceDiagram(
            {k: tuple(sorted(v)) for k, v in raw.items() if v}, policy
        )


def _value_fn(filt: Filtration):
    if filt.direction == "superlevel":
        return lambda i: -filt.thresholds[i]
    return lambda i: filt.thresholds[i]


def _prepare(filt: Filtration, max_hom_dim: int):
    """Index the filtration and build boundary bitmasks for dims <= max_hom_dim+1.

    Doubles as the closure check: a missing or later-born face raises.
    """
    needed = max_hom_dim + 1
    sims: list[tuple[Simplex, int]] = [
        (s, b) for s, b in filt.simplices if len(s) - 1 <= needed
    ]
    index_of: dict[Simplex, int] = {}
    for i, (s, _) in enumerate(sims):
        index_of[s] = i
    boundary: list[int] = []
    for j, (s, b) in enumerate(sims):
        if len(s) == 1:
            boundary.append(0)
            continue
        mask = 0
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            fi = index_of.get(face)
            if fi is None:
                raise ClosureError(f"face {face} of {s} is missing from the filtration")
            if fi >= j:
                raise ClosureError(f"face {face} does not precede its coface {s}")
            mask |= 1 << fi
        boundary.append(mask)
    return sims, boundary


def compute_pd(
    filt: Filtration,
    max_hom_dim: int,
    *,
    drop_zero: bool = True,
    use_clearing: bool = True,
) -> PersistenceDiagram:
    """Persistence diagram of a filtration in dimensions 0..max_hom_dim.

    Requires simplices one dimension above the highest requested homology
    dimension (they are what kills cycles). `use_clearing=False` selects
    the plain unoptimized reduction, kept for cross-checking.
    """
    if max_hom_dim < 0:
        raise InputError(f"max_hom_dim must be >= 0, got {max_hom_dim}")
    if filt.maxdim < max_hom_dim + 1:
        raise InputError(
            f"filtration caps dimension at {filt.maxdim}; computing PD_{max_hom_dim} "
            f"needs simplices up to dimension {max_hom_dim + 1}"
        )
    sims, boundary = _prepare(filt, max_hom_dim)
    n = len(sims)
    dim_of = [len(s) - 1 for s, _ in sims]
    birth_of = [b for _, b in sims]

    pairs: list[tuple[int, int]] = []  # (birth simplex index, death simplex index)
    paired_birth: set[int] = set()

    if use_clearing:
        top = max(dim_of, default=0)
        for d in range(top, 0, -1):
            pivot_owner: dict[int, int] = {}
            reduced: dict[int, int] = {}
            for j in range(n):
                if dim_of[j] != d or j in paired_birth:
                    continue
                col = boundary[j]
                while col:
                    piv = col.bit_length() - 1
                    k = pivot_owner.get(piv)
                    if k is None:
                        break
                    col ^= reduced[k]
                if col:
                    piv = col.bit_length() - 1
                    pivot_owner[piv] = j
                    reduced[j] = col
                    pairs.append((piv, j))
                    paired_birth.add(piv)
    else:
        pivot_owner = {}
        reduced = {}
        for j in range(n):
            if dim_of[j] == 0:
                continue
            col = boundary[j]
            while col:
                piv = col.bit_length() - 1
                k = pivot_owner.get(piv)
                if k is None:
                    break
                col ^= reduced[k]
            if col:
                piv = col.bit_length() - 1
                pivot_owner[piv] = j
                reduced[j] = col
                pairs.append((piv, j))
                paired_birth.add(piv)

    death_cols = {j for _, j in pairs}
    value = _value_fn(filt)
    out: dict[int, list[tuple[float, float]]] = {k: [] for k in range(max_hom_dim + 1)}
    for i, j in pairs:
        k = dim_of[i]
        if k > max_hom_dim:
            continue
        b, d = value(birth_of[i]), value(birth_of[j])
        if drop_zero and b == d:
            continue
        out[k].append((b, d))
    for i in range(n):
        k = dim_of[i]
        if k > max_hom_dim or i in paired_birth or i in death_cols:
            continue
        out[k].append((value(birth_of[i]), INF))
    return PersistenceDiagram.from_pairs(out, "drop" if drop_zero else "keep")


def pd0_unionfind(filt: Filtration, *, drop_zero: bool = True) -> PersistenceDiagram:
    """Dimension-0 diagram via disjoint-set union in filtration order.

    Elder rule: when two components merge, the younger one dies. Produces
    the same multiset as `compute_pd` restricted to dimension 0, in time
    near-linear in the number of vertices and edges.
    """
    if filt.maxdim < 1:
        raise InputError("union-find pass needs the filtration to include edges")
    verts: list[tuple[Simplex, int]] = []
    edges: list[tuple[Simplex, int]] = []
    for s, b in filt.simplices:
        if len(s) == 1:
            verts.append((s, b))
        elif len(s) == 2:
            edges.append((s, b))
    parent: dict[int, int] = {}
    comp_birth: dict[int, int] = {}
    for (v,), b in verts:
        parent[v] = v
        comp_birth[v] = b

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    value = _value_fn(filt)
    bars: list[tuple[float, float]] = []
    for (u, w), b in edges:
        ru, rw = find(u), find(w)
        if ru == rw:
            continue
        # the component born later dies; ties resolved toward rw dying
        if comp_birth[ru] > comp_birth[rw]:
            ru, rw = rw, ru
        bars.append((value(comp_birth[rw]), value(b)))
        parent[rw] = ru
    for v in parent:
        if parent[v] == v:
            bars.append((value(comp_birth[v]), INF))
    if drop_zero:
        bars = [(b, d) for b, d in bars if b != d]
    return PersistenceDiagram.from_pairs({0: bars}, "drop" if drop_zero else "keep")


def betti_numbers(filt: Filtration, max_hom_dim: int) -> list[int]:
    """Betti numbers of the final complex: infinite bars per dimension."""
    pd = compute_pd(filt, max_hom_dim)
    return [pd.infinite_count(k) for k in range(max_hom_dim + 1)]
