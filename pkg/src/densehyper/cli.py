"""Command line: ``densehyper {solve,gen,bench,expand,eval}``.

Exit status is 0 on success, 2 for bad input or options and 3 when a solver fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import baselines, synth
from .hypergraph import (HypergraphFormatError, load_hypergraph, read_labels, read_vertex_values,
                         write_hypergraph, write_vertex_set, write_vertex_values)
from .objectives import KINDS, ObjectiveError, ObjectiveSpec
from .solvers import SolverError, solve
from .validation import check_seeds, check_vertex_values

log = logging.getLogger("densehyper")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


class ConfigError(Exception):
    pass


def _objective(args, H) -> ObjectiveSpec:
    kind = args.obj
    if kind in ("adsh", "adshf"):
        if args.seeds is None:
            raise ConfigError(f"--obj {kind} needs --seeds")
        R = check_seeds(H, read_labels(args.seeds))
        return ObjectiveSpec.adsh(R, args.eps) if kind == "adsh" else ObjectiveSpec.adshf(R, args.eps)
    if kind in ("hdsp", "penalty"):
        if args.values is None:
            raise ConfigError(f"--obj {kind} needs --values")
        vals = check_vertex_values(H, read_vertex_values(args.values), "--values")
        return ObjectiveSpec.hdsp(vals) if kind == "hdsp" else ObjectiveSpec.with_penalty(vals)
    return ObjectiveSpec.dshg()


def cmd_solve(args) -> int:
    H = load_hypergraph(args.input)
    spec = _objective(args, H)
    method = args.method
    if method == "auto":
        method = "local" if spec.kind == "adsh" else "di"
    if method == "local" and spec.kind != "adsh":
        raise ConfigError("--method local applies to --obj adsh only")
    report = solve(H, spec, method=method)
    for flag in report.flags:
        if flag.startswith("global fallback"):
            print(f"warning: {flag}", file=sys.stderr)
    out = report.to_dict(H)
    print(f"density {report.best_density:.10g}")
    print(f"size {report.best_set.size}")
    print(f"iterations {report.iterations}")
    if args.output:
        Path(args.output).write_text(json.dumps(out, indent=2) + "\n")
    if args.set_output:
        write_vertex_set(H.labels[report.best_set], args.set_output)
    return EXIT_OK


def _one_based(H):
    return np.arange(1, H.n + 1)


def cmd_gen(args) -> int:
    out = Path(args.output)
    stem = out.with_suffix("")
    if args.family == "planted":
        scale = synth.FULL if args.scale == "full" else synth.DESK
        n = args.n or scale["n"]
        k = args.k or scale["k"]
        m2 = scale["m2"] if args.m2 is None else args.m2
        inst = synth.generate_planted(n, k, args.m1, m2, args.p_stop, args.max_size, seed=args.seed)
        labels = inst.H.labels + 1
        write_hypergraph(inst.H, out, labels)
        write_vertex_values(labels, inst.clusters, f"{stem}.clusters")
        print(f"wrote {inst.H.n} vertices, {inst.H.m} hyperedges to {out}")
    elif args.family == "peeling-counterexample":
        ce = baselines.make_peeling_counterexample(args.a)
        labels = _one_based(ce.H)
        write_hypergraph(ce.H, out, labels)
        write_vertex_set(labels[ce.seeds], f"{stem}.seeds")
        write_vertex_values(labels, ce.penalty, f"{stem}.penalty")
        print(f"wrote {ce.H.n} vertices, {ce.H.m} edges to {out}")
    else:
        ce = baselines.make_locality_counterexample(args.a, args.b, args.c)
        labels = _one_based(ce.H)
        write_hypergraph(ce.H, out, labels)
        write_vertex_set(labels[ce.seeds], f"{stem}.seeds")
        print(f"wrote {ce.H.n} vertices, {ce.H.m} edges to {out}")
    return EXIT_OK


def _write_rows(rows, fields, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)


def cmd_bench(args) -> int:
    scale = synth.FULL if args.scale == "full" else synth.DESK
    if args.kind == "di-bs":
        seqs = np.random.SeedSequence(args.seed).spawn(len(args.m1))
        insts = [synth.generate_planted(scale["n"], scale["k"], m1, scale["m2"], seed=s).H
                 for m1, s in zip(args.m1, seqs)]
        rows = synth.run_di_vs_bs(insts)
        fields = ["instance", "n", "m", "di_iters", "bs_iters", "bs_expected",
                  "di_density", "bs_density", "di_millis", "bs_millis"]
        _write_rows(rows, fields, args.output)
        for r in rows:
            print(f"instance {r['instance']}: di {r['di_iters']} bs {r['bs_iters']}")
    else:
        res = synth.run_planted_benchmark(
            difficulties=args.m1, n=scale["n"], k=scale["k"], m2=scale["m2"],
            methods=tuple(args.methods), seeds_per_cluster=args.seeds_per_cluster,
            eps=args.eps, seed=args.seed, threads=args.threads)
        res.to_csv(args.output)
        for (method, m1), s in res.summary().items():
            print(f"{method} m1={m1} f1={s['mean']:.4f} +- {s['stderr']:.4f}")
    return EXIT_OK


def cmd_expand(args) -> int:
    H = load_hypergraph(args.input)
    G = baselines.clique_expand(H, args.mode, cap=args.cap)
    with open(args.output, "w") as fh:
        for u, v, w in zip(G.u, G.v, G.w):
            fh.write(f"{H.labels[u]} {H.labels[v]} {float(w)!r}\n")
    print(f"wrote {G.m} weighted edges to {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    score = synth.f1(read_labels(args.detected), read_labels(args.truth))
    print(f"f1 {score:.10g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="densehyper", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one objective on a hyperedge-list file")
    s.add_argument("input")
    s.add_argument("--obj", choices=KINDS, default="dshg")
    s.add_argument("--eps", type=float, default=1.0)
    s.add_argument("--method", choices=("auto", "di", "bs", "local", "peel"), default="auto")
    s.add_argument("--seeds", help="seed-set file, one label per line")
    s.add_argument("--values", help="'label value' file of vertex rewards (hdsp) or penalties")
    s.add_argument("-o", "--output", help="JSON report path")
    s.add_argument("--set-output", help="write the returned vertex labels here")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("family", choices=("planted", "peeling-counterexample", "locality-counterexample"))
    g.add_argument("-o", "--output", default="instance.hgr")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--scale", choices=("desk", "full"), default="desk")
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m1", type=int, default=0)
    g.add_argument("--m2", type=int)
    g.add_argument("--p-stop", type=float, default=0.2)
    g.add_argument("--max-size", type=int, default=12)
    g.add_argument("--a", type=int, default=4)
    g.add_argument("--b", type=int, default=20)
    g.add_argument("--c", type=int, default=200)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a benchmark and write CSV")
    b.add_argument("kind", choices=("di-bs", "planted"))
    b.add_argument("-o", "--output", default="bench.csv")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--scale", choices=("desk", "full"), default="desk")
    b.add_argument("--m1", type=int, nargs="+", default=[0, 250, 500])
    b.add_argument("--methods", nargs="+", choices=synth.METHODS, default=list(synth.METHODS))
    b.add_argument("--seeds-per-cluster", type=int, default=2)
    b.add_argument("--eps", type=float, default=1.0)
    b.add_argument("--threads", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("expand", help="clique-expand a hypergraph to a weighted edge list")
    e.add_argument("input")
    e.add_argument("--mode", choices=("uce", "wce"), default="wce")
    e.add_argument("--cap", type=int, default=1000)
    e.add_argument("-o", "--output", default="expanded.txt")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("eval", help="F1 score of a detected set against a truth set")
    v.add_argument("detected")
    v.add_argument("truth")
    v.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, HypergraphFormatError, ObjectiveError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, AssertionError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
