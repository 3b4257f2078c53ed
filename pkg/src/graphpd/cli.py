"""Command-line interface.

Subcommands:
    reduce      shrink a graph (coral / prunit / combined), write the
                reduced edge list, surviving filter values and a report
    pd          compute a persistence diagram, write JSON/CSV (+ figure)
    verify      certify reduction exactness over an ER sweep or files,
                write a JSONL report; exit 1 on any failure
    experiment  clustering-betti and kahle-sweep CSV tables (+ figures)
    fetch       download benchmark networks from the manifest

Exit codes: 0 success / all checks passed, 1 verification failure,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import datasets
from .coral import coral_reduce
from .errors import InputError
from .filtration import build
from .graph import Graph, clustering_coefficient, diameter
from .persistence import betti_numbers, compute_pd
from .prunit import prunit
from .report import (
    ReductionReport,
    render_clustering_betti_figure,
    render_diagram_figure,
    render_kahle_figure,
    render_reduction_figure,
)
from .verify import (
    connected_random_graph,
    degree_filter,
    random_graph,
    verify_combined,
    verify_coral,
    verify_prunit,
)

DIRECTION_OF = {"sub": "sublevel", "super": "superlevel", "power": "power"}


def _now_ms() -> float:
    return time.monotonic() * 1000.0


def _load_graph(path: str) -> Graph:
    g, stats = datasets.load_edge_list(path)
    if stats.self_loops_dropped or stats.duplicates_merged:
        print(
            f"normalized {path}: dropped {stats.self_loops_dropped} self-loops, "
            f"merged {stats.duplicates_merged} duplicate edges",
            file=sys.stderr,
        )
    return g


def _resolve(g: Graph, filter_text: str) -> dict[int, float]:
    return datasets.resolve_filter(g, datasets.FilterSpec.parse(filter_text))


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# reduce

def cmd_reduce(args) -> int:
    g = _load_graph(args.input)
    name = args.name or Path(args.input).name.split(".")[0]
    direction = DIRECTION_OF[args.direction]
    if direction == "power" and args.method != "prunit":
        raise InputError(
            "core reduction does not extend to the power filtration; "
            "use --method prunit with --direction power"
        )
    needs_filter = direction != "power"
    f = _resolve(g, args.filter) if needs_filter else None

    t0 = _now_ms()
    trace = None
    if args.method == "coral":
        if args.k is None:
            raise InputError("--k (target homology dimension) is required for coral")
        reduced, f_out = coral_reduce(g, f, args.k)
        mode = f"coral(j={args.k})"
    elif args.method == "prunit":
        p_mode = direction
        reduced, f_out, trace = prunit(
            g, f if p_mode != "power" else None, p_mode, strict_pairs=args.strict_pairs
        )
        mode = f"prunit-{p_mode}({args.filter})"
    elif args.method == "combined":
        if args.k is None:
            raise InputError("--k (target homology dimension) is required for combined")
        h, fh, trace = prunit(g, f, "sublevel", strict_pairs=args.strict_pairs)
        reduced, f_out = coral_reduce(h, fh, args.k)
        mode = f"combined(k={args.k},{args.filter})"
    else:
        raise InputError(f"unknown method {args.method!r}")
    reduce_ms = _now_ms() - t0

    report = ReductionReport(
        dataset=name,
        mode=mode,
        vertices_before=g.num_vertices,
        vertices_after=reduced.num_vertices,
        edges_before=g.num_edges,
        edges_after=reduced.num_edges,
        reduce_ms=reduce_ms,
        invocation=sys.argv[1:],
    )

    if args.max_dim is not None:
        maxdim = args.max_dim + 1
        if direction == "power":
            mp = max(1, diameter(g))
            filt_before = build(g, "power", None, maxdim, max_power=mp)
            t1 = _now_ms()
            filt_after = build(reduced, "power", None, maxdim, max_power=mp)
        else:
            filt_before = build(g, direction, f, maxdim)
            t1 = _now_ms()
            filt_after = build(reduced, direction, f_out, maxdim)
        report.filtration_ms = _now_ms() - t1
        report.simplices_before = len(filt_before)
        report.simplices_after = len(filt_after)
        t2 = _now_ms()
        compute_pd(filt_after, args.max_dim)
        report.persistence_ms = _now_ms() - t2

    out = _outdir(args)
    print(json.dumps(report.to_json_obj(), indent=2))
    if out is not None:
        with open(out / f"{name}.reduced.txt", "w") as fh:
            datasets.write_edge_list(reduced, fh)
        if f_out is not None:
            with open(out / f"{name}.filter.csv", "w", newline="") as fh:
                datasets.write_filter_csv(f_out, fh)
        if trace is not None:
            with open(out / f"{name}.trace.csv", "w", newline="") as fh:
                trace.write_csv(fh)
        with open(out / f"{name}.report.json", "w") as fh:
            json.dump(report.to_json_obj(), fh, indent=2)
            fh.write("\n")
        if not args.no_plot:
            render_reduction_figure(report, out / f"{name}.report.png")
    return 0


# ---------------------------------------------------------------------------
# pd

def cmd_pd(args) -> int:
    g = _load_graph(args.input)
    name = args.name or Path(args.input).name.split(".")[0]
    direction = DIRECTION_OF[args.direction]
    f = None if direction == "power" else _resolve(g, args.filter)

    t0 = _now_ms()
    filt = build(
        g, direction, f, args.max_dim + 1,
        step=args.step, max_power=args.max_power,
    )
    build_ms = _now_ms() - t0
    t1 = _now_ms()
    pd = compute_pd(filt, args.max_dim, drop_zero=(args.zero_pairs == "drop"))
    pd_ms = _now_ms() - t1
    counts = " ".join(f"dim{d}:{c}" for d, c in sorted(filt.counts_by_dim().items()))
    print(
        f"filtration: {len(filt)} simplices ({counts}), "
        f"{len(filt.thresholds)} thresholds, built in {build_ms:.1f} ms; "
        f"diagram in {pd_ms:.1f} ms",
        file=sys.stderr,
    )

    out = _outdir(args)
    obj = pd.to_json_obj()
    obj["graph"] = name
    obj["direction"] = direction
    if out is None:
        print(json.dumps(obj, indent=2))
    else:
        with open(out / f"{name}.pd.json", "w") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
        with open(out / f"{name}.pd.csv", "w", newline="") as fh:
            fh.write("dim,birth,death\n")
            for k, b, d in pd.to_csv_rows():
                fh.write(f"{k},{b},{d}\n")
        if not args.no_plot:
            render_diagram_figure(pd, out / f"{name}.pd.png", title=name)
    return 0


# ---------------------------------------------------------------------------
# verify

def _verify_one(task: tuple) -> dict:
    theorem, dims, cap, fault, spec = task
    kind = spec[0]
    if kind == "er":
        _, n, p, seed, connected = spec
        g = connected_random_graph(n, p, seed) if connected else random_graph(n, p, seed)
        name = f"er(n={n},p={p},seed={seed})"
        f = degree_filter(g)
        seed_for_fault = seed
    else:
        _, path, filter_text = spec
        g, _stats = datasets.load_edge_list(path)
        name = Path(path).name
        f = datasets.resolve_filter(g, datasets.FilterSpec.parse(filter_text))
        seed_for_fault = 0
    fault_seed = seed_for_fault if fault else None

    if theorem == "coral":
        reports = [verify_coral(g, f, j, cap, name, fault_seed=fault_seed) for j in dims]
    elif theorem == "combined":
        reports = [verify_combined(g, f, k, cap, name, fault_seed=fault_seed) for k in dims]
    elif theorem == "prunit-sub":
        reports = [verify_prunit(g, f, "sublevel", cap, name, fault_seed=fault_seed)]
    elif theorem == "prunit-super":
        reports = [verify_prunit(g, f, "superlevel", cap, name, fault_seed=fault_seed)]
    elif theorem == "prunit-power":
        reports = [verify_prunit(g, None, "power", cap, name, fault_seed=fault_seed)]
    else:
        raise InputError(f"unknown theorem {theorem!r}")
    return {
        "name": name,
        "ok": all(r.ok for r in reports),
        "reports": [r.to_json_obj() for r in reports],
    }


def cmd_verify(args) -> int:
    dims = tuple(args.dims)
    cap = max(dims)
    connected = args.theorem == "prunit-power" or args.connected

    tasks = []
    if args.input:
        for path in args.input:
            tasks.append((args.theorem, dims, cap, args.inject_fault,
                          ("file", path, args.filter)))
    else:
        span = args.n_max - args.n_min + 1
        for i in range(args.count):
            n = args.n_min + i % span
            p = args.p[(i // span) % len(args.p)]
            seed = args.seed + i
            tasks.append((args.theorem, dims, cap, args.inject_fault,
                          ("er", n, p, seed, connected)))

    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_verify_one, tasks))
    else:
        results = [_verify_one(t) for t in tasks]

    out = _outdir(args)
    lines = []
    failures = 0
    for res in results:
        for rep in res["reports"]:
            rep["invocation"] = sys.argv[1:]
            lines.append(json.dumps(rep))
        if not res["ok"]:
            failures += 1
    if out is None:
        for line in lines:
            print(line)
    else:
        with open(out / f"verify_{args.theorem}.jsonl", "w") as fh:
            fh.write("\n".join(lines) + "\n")
        idx = 0
        for res in results:
            for rep in res["reports"]:
                if rep.get("counterexample"):
                    ce = rep["counterexample"]
                    stem = out / f"counterexample_{idx}"
                    with open(f"{stem}.edges.txt", "w") as fh:
                        for u, v in ce["edges"]:
                            fh.write(f"{u} {v}\n")
                    if ce["filter"]:
                        with open(f"{stem}.filter.csv", "w") as fh:
                            fh.write("vertex_id,value\n")
                            for v, val in ce["filter"].items():
                                fh.write(f"{v},{val}\n")
                    with open(f"{stem}.json", "w") as fh:
                        json.dump(rep, fh, indent=2)
                    idx += 1
    print(
        f"{args.theorem}: {len(results) - failures}/{len(results)} instances passed",
        file=sys.stderr,
    )
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# experiment

def cmd_experiment(args) -> int:
    out = _outdir(args)
    if args.which == "clustering-betti":
        rows: list[tuple[str, float, int, int]] = []
        graphs: list[tuple[str, Graph]] = []
        if args.tu:
            for item in datasets.load_tu_dataset(args.tu):
                graphs.append((item.name, item.graph))
        for path in args.input or []:
            graphs.append((Path(path).name, _load_graph(path)))
        if args.er_count:
            for i in range(args.er_count):
                seed = args.seed + i
                graphs.append(
                    (f"er(n={args.er_n},p={args.er_p},seed={seed})",
                     random_graph(args.er_n, args.er_p, seed)),
                )
        if not graphs:
            raise InputError("clustering-betti needs --tu, --input or --er-count")
        for name, g in graphs:
            cc = clustering_coefficient(g)
            filt = build(g, "sublevel", {v: 0.0 for v in g.vertex_ids}, 4)
            betti = betti_numbers(filt, 3)
            rows.append((name, cc, betti[2], betti[3]))
        header = "graph,clustering_coefficient,betti_2,betti_3"
        csv_lines = [header] + [f"{n},{cc:.6f},{b2},{b3}" for n, cc, b2, b3 in rows]
        if out is None:
            print("\n".join(csv_lines))
        else:
            (out / "clustering_betti.csv").write_text("\n".join(csv_lines) + "\n")
            if not args.no_plot:
                render_clustering_betti_figure(rows, out / "clustering_betti.png")
        return 0

    if args.which == "kahle-sweep":
        krows: list[tuple[int, float, int, int, int]] = []
        for p in args.p:
            for i in range(args.seeds):
                seed = args.seed + i
                g = random_graph(args.n, p, seed)
                filt = build(g, "sublevel", {v: 0.0 for v in g.vertex_ids}, 3)
                b2 = betti_numbers(filt, 2)[2]
                krows.append((args.n, p, seed, b2, int(b2 > 0)))
        header = "n,p,seed,betti_2,nontrivial"
        csv_lines = [header] + [
            f"{n},{p:g},{s},{b},{nt}" for n, p, s, b, nt in krows
        ]
        if out is None:
            print("\n".join(csv_lines))
        else:
            (out / "kahle_sweep.csv").write_text("\n".join(csv_lines) + "\n")
            if not args.no_plot:
                render_kahle_figure(krows, out / "kahle_sweep.png")
        return 0

    raise InputError(f"unknown experiment {args.which!r}")


# ---------------------------------------------------------------------------
# fetch

def cmd_fetch(args) -> int:
    names = [e.name for e in datasets.MANIFEST] if args.all else args.names
    if not names:
        raise InputError("give dataset names or --all")
    cache = Path(args.cache) if args.cache else None
    for dataset_name in names:
        path = datasets.fetch_dataset(dataset_name, cache)
        print(f"{dataset_name}: {path}")
        if args.check:
            entry = datasets.manifest_entry(dataset_name)
            g, _stats = datasets.load_edge_list(path)
            status = "ok" if (g.num_vertices, g.num_edges) == (entry.vertices, entry.edges) else "MISMATCH"
            print(
                f"{dataset_name}: |V|={g.num_vertices} (expect {entry.vertices}), "
                f"|E|={g.num_edges} (expect {entry.edges}) {status}"
            )
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output directory (default: print to stdout)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="graphpd",
        description="Exact persistence diagrams of vertex-filtered graphs, "
                    "with diagram-preserving reductions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("reduce", help="reduce a graph without changing its diagrams")
    pr.add_argument("--input", required=True, help="edge-list file (.txt or .txt.gz)")
    pr.add_argument("--method", required=True, choices=("coral", "prunit", "combined"))
    pr.add_argument("--filter", default="degree",
                    help="degree | coreness | constant:<v> | attr:<csv>")
    pr.add_argument("--direction", default="sub", choices=("sub", "super", "power"))
    pr.add_argument("--k", type=int, help="target homology dimension (coral/combined)")
    pr.add_argument("--strict-pairs", action="store_true",
                    help="skip mutually dominating pairs instead of breaking ties")
    pr.add_argument("--max-dim", type=int,
                    help="also build filtrations and compute the reduced diagram "
                         "up to this homology dimension")
    pr.add_argument("--name", help="dataset name used in outputs")
    _add_common_output(pr)
    pr.set_defaults(func=cmd_reduce)

    pp = sub.add_parser("pd", help="compute a persistence diagram")
    pp.add_argument("--input", required=True)
    pp.add_argument("--filter", default="degree")
    pp.add_argument("--direction", default="sub", choices=("sub", "super", "power"))
    pp.add_argument("--max-dim", type=int, default=1, help="highest homology dimension")
    pp.add_argument("--zero-pairs", default="drop", choices=("drop", "keep"))
    pp.add_argument("--step", type=float, help="optional threshold coarsening step")
    pp.add_argument("--max-power", type=int,
                    help="cap for the power filtration (default: graph diameter)")
    pp.add_argument("--name")
    _add_common_output(pp)
    pp.set_defaults(func=cmd_pd)

    pv = sub.add_parser("verify", help="certify that reductions change no diagram")
    pv.add_argument("--theorem", required=True,
                    choices=("coral", "prunit-sub", "prunit-super",
                             "prunit-power", "combined"))
    pv.add_argument("--dims", type=int, nargs="+", default=[0, 1, 2],
                    help="homology dimensions of interest")
    pv.add_argument("--count", type=int, default=200, help="number of ER instances")
    pv.add_argument("--n-min", type=int, default=8)
    pv.add_argument("--n-max", type=int, default=30)
    pv.add_argument("--p", type=float, nargs="+",
                    default=[0.1, 0.2, 0.3, 0.4, 0.5])
    pv.add_argument("--seed", type=int, default=0, help="base seed of the sweep")
    pv.add_argument("--connected", action="store_true",
                    help="restrict the sweep to connected instances")
    pv.add_argument("--input", nargs="*",
                    help="verify these edge-list files instead of an ER sweep")
    pv.add_argument("--filter", default="degree")
    pv.add_argument("--inject-fault", action="store_true",
                    help="negative control: delete one extra vertex after reducing")
    pv.add_argument("--workers", type=int, default=1)
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_verify)

    pe = sub.add_parser("experiment", help="reproduce the survey experiments")
    pe.add_argument("which", choices=("clustering-betti", "kahle-sweep"))
    pe.add_argument("--tu", help="TU dataset directory (clustering-betti)")
    pe.add_argument("--input", nargs="*", help="edge-list files (clustering-betti)")
    pe.add_argument("--er-count", type=int, default=0)
    pe.add_argument("--er-n", type=int, default=50)
    pe.add_argument("--er-p", type=float, default=0.2)
    pe.add_argument("--n", type=int, default=100, help="graph order (kahle-sweep)")
    pe.add_argument("--p", type=float, nargs="+", default=[0.05],
                    help="edge probabilities (kahle-sweep)")
    pe.add_argument("--seeds", type=int, default=100, help="seed count (kahle-sweep)")
    pe.add_argument("--seed", type=int, default=0, help="base seed")
    _add_common_output(pe)
    pe.set_defaults(func=cmd_experiment)

    pf = sub.add_parser("fetch", help="download benchmark networks")
    pf.add_argument("names", nargs="*", help="dataset names from the manifest")
    pf.add_argument("--all", action="store_true")
    pf.add_argument("--cache", help=f"cache directory (default ${datasets.CACHE_ENV} "
                                    f"or ~/.cache/graphpd)")
    pf.add_argument("--check", action="store_true",
                    help="load after download and compare vertex/edge counts")
    pf.set_defaults(func=cmd_fetch)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
