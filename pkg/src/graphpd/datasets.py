"""Graph ingestion: edge lists, TU-style graph collections, ego networks,
filter construction, and the download manifest for the large benchmark
networks.

Edge-list files follow the SNAP convention: whitespace-separated vertex-id
pairs, '#' comment lines, optionally gzip-compressed. Real files contain
self-loops and both edge orientations; loading normalizes to a simple
undirected graph and reports what was fixed.
"""

from __future__ import annotations

import csv
import gzip
import hashlib
import io
import os
import urllib.request
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from .coral import core_numbers
from .errors import FormatError, InputError
from .graph import Graph

CACHE_ENV = "GRAPHPD_CACHE"


@dataclass(frozen=True)
class LoadStats:
    """What normalization did to one edge-list file."""

    lines: int
    self_loops_dropped: int
    duplicates_merged: int


def _open_text(source) -> IO[str]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.suffix == ".gz":
            return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
        return open(path, "r", encoding="utf-8")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    return source


def load_edge_list(source) -> tuple[Graph, LoadStats]:
    """Parse an edge list into a normalized Graph.

    Accepts a path (possibly .gz), bytes, or an open text handle. Directed
    inputs are symmetrized; self-loops are dropped and duplicate or
    reversed edges merged, with counts reported alongside the graph.
    """
    fh = _open_text(source)
    close = isinstance(source, (str, Path, bytes))
    try:
        vertices: set[int] = set()
        edges: set[tuple[int, int]] = set()
        self_loops = 0
        duplicates = 0
        lines = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                # honor our own writer's isolated-vertex annotation so
                # graphs round-trip; foreign comments never match
                if line.startswith("# isolated "):
                    vertices.add(int(line.split()[2]))
                continue
            lines += 1
            parts = line.split()
            if len(parts) < 2:
                raise FormatError(f"line {lineno}: expected two vertex ids, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(
                    f"line {lineno}: non-integer vertex id in {line!r}"
                ) from None
            if u < 0 or v < 0:
                raise FormatError(f"line {lineno}: negative vertex id in {line!r}")
            vertices.add(u)
            vertices.add(v)
            if u == v:
                self_loops += 1
                continue
            e = (u, v) if u < v else (v, u)
            if e in edges:
                duplicates += 1
            else:
                edges.add(e)
        return Graph(vertices, edges), LoadStats(lines, self_loops, duplicates)
    finally:
        if close:
            fh.close()


def write_edge_list(g: Graph, fh: IO[str]) -> None:
    """One 'u v' line per edge (u < v), preceded by a size comment.

    Isolated vertices are recorded as '# isolated <v>' lines, which
    load_edge_list understands, so write/load round-trips exactly.
    """
    fh.write(f"# vertices {g.num_vertices} edges {g.num_edges}\n")
    for v in g.vertex_ids:
        if g.degree(v) == 0:
            fh.write(f"# isolated {v}\n")
    for u, v in g.edges():
        fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# TU-Dortmund kernel datasets

@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    label: int
    name: str


def load_tu_dataset(directory) -> list[LabeledGraph]:
    """Load a TU-style dataset: DS_A.txt, DS_graph_indicator.txt, DS_graph_labels.txt.

    The global edge list is split into one Graph per graph id; vertex ids
    keep their original global values. An edge whose endpoints belong to
    two different graphs is a format error.
    """
    directory = Path(directory)
    candidates = sorted(directory.glob("*_A.txt"))
    if not candidates:
        raise FormatError(f"no *_A.txt edge file found in {directory}")
    a_file = candidates[0]
    ds = a_file.name[: -len("_A.txt")]
    indicator_file = directory / f"{ds}_graph_indicator.txt"
    labels_file = directory / f"{ds}_graph_labels.txt"
    for req in (indicator_file, labels_file):
        if not req.exists():
            raise FormatError(f"missing {req.name} in {directory}")

    graph_of: dict[int, int] = {}
    with open(indicator_file) as fh:
        for vid, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            graph_of[vid] = int(line)
    n_graphs = max(graph_of.values(), default=0)

    labels: dict[int, int] = {}
    with open(labels_file) as fh:
        for gid, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            labels[gid] = int(line)
    if len(labels) != n_graphs:
        raise FormatError(
            f"{labels_file.name} has {len(labels)} labels for {n_graphs} graphs"
        )

    vertices_of: dict[int, set[int]] = {gid: set() for gid in range(1, n_graphs + 1)}
    for vid, gid in graph_of.items():
        vertices_of[gid].add(vid)
    edges_of: dict[int, set[tuple[int, int]]] = {gid: set() for gid in vertices_of}
    with open(a_file) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) < 2:
                raise FormatError(f"{a_file.name} line {lineno}: malformed edge {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if u not in graph_of or v not in graph_of:
                raise FormatError(
                    f"{a_file.name} line {lineno}: edge ({u}, {v}) references a vertex "
                    f"outside the indicator file"
                )
            if graph_of[u] != graph_of[v]:
                raise FormatError(
                    f"{a_file.name} line {lineno}: edge ({u}, {v}) crosses graphs "
                    f"{graph_of[u]} and {graph_of[v]}"
                )
            if u == v:
                continue
            edges_of[graph_of[u]].add((min(u, v), max(u, v)))

    out = []
    for gid in range(1, n_graphs + 1):
        g = Graph(vertices_of[gid], edges_of[gid])
        out.append(LabeledGraph(g, labels[gid], f"{ds}_{gid}"))
    return out


# ---------------------------------------------------------------------------
# ego networks and filter functions

def ego_network(g: Graph, center: int, hops: int) -> Graph:
    """Induced subgraph on every vertex within `hops` of `center`."""
    if hops < 1:
        raise InputError(f"hops must be >= 1, got {hops}")
    if center not in g:
        raise InputError(f"unknown center vertex {center}")
    dist = {center: 0}
    queue = deque([center])
    while queue:
        u = queue.popleft()
        if dist[u] >= hops:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return g.induced_subgraph(dist)


@dataclass(frozen=True)
class FilterSpec:
    """How to derive a vertex filter: degree, coreness, constant:<v>, attr:<csv>."""

    kind: str
    value: float | None = None
    path: str | None = None

    @staticmethod
    def parse(text: str) -> FilterSpec:
        if text == "degree":
            return FilterSpec("degree")
        if text == "coreness":
            return FilterSpec("coreness")
        if text.startswith("constant:"):
            try:
                return FilterSpec("constant", value=float(text.split(":", 1)[1]))
            except ValueError:
                raise InputError(f"bad constant filter value in {text!r}") from None
        if text.startswith("attr:"):
            return FilterSpec("attribute", path=text.split(":", 1)[1])
        raise InputError(
            f"unknown filter spec {text!r}; expected degree, coreness, "
            f"constant:<v> or attr:<csv>"
        )


def resolve_filter(g: Graph, spec: FilterSpec) -> dict[int, float]:
    """Total vertex filter on g per the spec.

    Degree and coreness are measured on THIS graph: resolve before
    reducing, then carry the values forward, never recompute them on a
    reduced graph.
    """
    if spec.kind == "degree":
        return {v: float(g.degree(v)) for v in g.vertex_ids}
    if spec.kind == "coreness":
        core = core_numbers(g)
        return {v: float(core[v]) for v in g.vertex_ids}
    if spec.kind == "constant":
        return {v: float(spec.value) for v in g.vertex_ids}
    if spec.kind == "attribute":
        values: dict[int, float] = {}
        with open(spec.path, newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    vid = int(row[0])
                except ValueError:
                    continue  # header line
                values[vid] = float(row[1])
        missing = [v for v in g.vertex_ids if v not in values]
        if missing:
            raise InputError(
                f"attribute file {spec.path} misses {len(missing)} vertices, "
                f"e.g. {missing[0]}"
            )
        return {v: values[v] for v in g.vertex_ids}
    raise InputError(f"unknown filter kind {spec.kind!r}")


def write_filter_csv(f: dict[int, float], fh: IO[str]) -> None:
    w = csv.writer(fh)
    w.writerow(["vertex_id", "value"])
    for v in sorted(f):
        w.writerow([v, f[v]])


# ---------------------------------------------------------------------------
# download manifest for the large benchmark networks

@dataclass(frozen=True)
class ManifestEntry:
    name: str
    url: str
    sha256: str  # empty = not pinned yet; recorded on first fetch
    vertices: int
    edges: int


MANIFEST: tuple[ManifestEntry, ...] = (
    ManifestEntry("com-youtube", "https://snap.stanford.edu/data/bigdata/communities/com-youtube.ungraph.txt.gz", "", 1134890, 2987624),
    ManifestEntry("com-amazon", "https://snap.stanford.edu/data/bigdata/communities/com-amazon.ungraph.txt.gz", "", 334863, 925872),
    ManifestEntry("com-dblp", "https://snap.stanford.edu/data/bigdata/communities/com-dblp.ungraph.txt.gz", "", 317080, 1049866),
    ManifestEntry("web-Stanford", "https://snap.stanford.edu/data/web-Stanford.txt.gz", "", 281903, 1992636),
    ManifestEntry("emailEuAll", "https://snap.stanford.edu/data/email-EuAll.txt.gz", "", 265214, 364481),
    ManifestEntry("soc-Epinions1", "https://snap.stanford.edu/data/soc-Epinions1.txt.gz", "", 75879, 405740),
    ManifestEntry("p2pGnutella31", "https://snap.stanford.edu/data/p2p-Gnutella31.txt.gz", "", 62586, 147892),
    ManifestEntry("Brightkite_edges", "https://snap.stanford.edu/data/loc-brightkite_edges.txt.gz", "", 58228, 214078),
    ManifestEntry("Email-Enron", "https://snap.stanford.edu/data/email-Enron.txt.gz", "", 36692, 183831),
    ManifestEntry("CA-CondMat", "https://snap.stanford.edu/data/ca-CondMat.txt.gz", "", 23133, 93439),
    ManifestEntry("oregon1_010526", "https://snap.stanford.edu/data/oregon1_010526.txt.gz", "", 11174, 23409),
)


def manifest_entry(name: str) -> ManifestEntry:
    for entry in MANIFEST:
        if entry.name == name:
            return entry
    raise InputError(
        f"unknown dataset {name!r}; known: {', '.join(e.name for e in MANIFEST)}"
    )


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "graphpd"


def fetch_dataset(name: str, directory: Path | None = None, timeout: float = 120.0) -> Path:
    """Download a manifest dataset into the cache; returns the local path.

    Verifies the pinned sha256 when one is recorded, otherwise prints the
    observed hash so it can be pinned. Skips the download when the file is
    already cached.
    """
    entry = manifest_entry(name)
    directory = directory or cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    dest = directory / f"{entry.name}.txt.gz"
    if not dest.exists():
        with urllib.request.urlopen(entry.url, timeout=timeout) as resp:
            data = resp.read()
        dest.write_bytes(data)
    digest = hashlib.sha256(dest.read_bytes()).hexdigest()
    if entry.sha256 and digest != entry.sha256:
        raise FormatError(
            f"{dest} sha256 {digest} does not match pinned {entry.sha256}"
        )
    if not entry.sha256:
        print(f"{entry.name}: sha256 {digest} (unpinned)")
    return dest
