"""setlab command line: generate instances, build/query/verify structures,
sweep space-time tradeoffs to CSV, and emit the problem encoders' artifacts.

Exit codes: 0 success, 1 verification mismatch, 2 usage/config error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass

from . import apps, quadtree
from .core import (
    InstanceFormatError,
    ParameterError,
    SetLabError,
    all_pairs,
    gen_nested_instance,
    gen_random_instance,
    load_instance,
    load_pairs,
    oracle_intersect,
    save_instance,
)
from .reduction import SD, SI, alg1_inner_builder, build_reduced, oracle_inner_builder
from .structures import (
    build_alg1,
    build_alg2,
    build_alg3,
    build_hybrid,
    build_sd_count,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_IO = 3

CSV_SCHEMA = "# setlab-bench-csv v1"
CSV_COLUMNS = "structure,param,words,probes_mean,probes_p99,out_mean,queries,ms"


@dataclass(frozen=True)
class BenchRecord:
    structure: str
    param: int
    words: int
    probes_mean: float
    probes_p99: int
    out_mean: float
    queries: int
    ms: float

    def csv_row(self) -> str:
        return (
            f"{self.structure},{self.param},{self.words},"
            f"{self.probes_mean:.3f},{self.probes_p99},{self.out_mean:.3f},"
            f"{self.queries},{self.ms:.0f}"
        )


def _build_structure(sys_, alg: str, r: int, budget: int | None):
    if alg == "1":
        return build_alg1(sys_, r)
    if alg == "2":
        return build_alg2(sys_, max(1, r))
    if alg == "3":
        return build_alg3(sys_, r)
    if alg == "sdcount":
        return build_sd_count(sys_, r)
    if alg == "hybrid":
        if budget is None:
            budget = 10 * max(sys_.N, 1)
        return build_hybrid(sys_, budget)
    raise ParameterError(f"unknown structure {alg!r}")


def cmd_gen(args) -> int:
    if args.family == "uniform":
        sys_ = gen_random_instance(args.m, args.u, args.n, args.seed)
    elif args.family == "nested":
        sys_ = gen_nested_instance(args.m, args.u, args.seed)
    else:
        raise ParameterError(f"unknown family {args.family!r}")
    save_instance(sys_, args.out)
    print(f"gen m={sys_.m} u={sys_.u} N={sys_.N} -> {args.out}")
    return EXIT_OK


def cmd_build(args) -> int:
    sys_ = load_instance(args.infile)
    t0 = time.perf_counter()
    st = _build_structure(sys_, args.alg, args.r, args.budget)
    ms = (time.perf_counter() - t0) * 1000
    print(
        f"build alg={args.alg} param={args.r} m={sys_.m} u={sys_.u} "
        f"N={sys_.N} words={st.meter.words} ms={ms:.0f}"
    )
    return EXIT_OK


def cmd_query(args) -> int:
    sys_ = load_instance(args.infile)
    st = _build_structure(sys_, args.alg, args.r, args.budget)
    pairs = load_pairs(args.pairs) if args.pairs else list(all_pairs(sys_))
    lines = []
    for i, j in pairs:
        res = st.query(i, j)
        if args.alg == "sdcount":
            lines.append(f"{i} {j} {res}")
        else:
            lines.append(" ".join([str(i), str(j), str(res.out), *map(str, res.elements)]))
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    sys_ = load_instance(args.infile)
    st = _build_structure(sys_, args.alg, args.r, args.budget)
    pairs = load_pairs(args.pairs) if args.pairs else list(all_pairs(sys_))
    bad = 0
    for i, j in pairs:
        want = oracle_intersect(sys_, i, j)
        if args.alg == "sdcount":
            got = st.query(i, j)
            ok = got == want.out
            if not ok:
                print(f"MISMATCH {i} {j}: got {got}, oracle {want.out}")
        else:
            got = st.query(i, j)
            ok = got.elements == want.elements
            if not ok:
                print(f"MISMATCH {i} {j}: got {got.elements}, oracle {want.elements}")
        bad += not ok
    status = "PASS" if bad == 0 else "FAIL"
    print(f"verify {status} alg={args.alg} param={args.r} pairs={len(pairs)} mismatches={bad}")
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def _bench_one(sys_, alg: str, param: int, queries: int, seed: int, time_mode: str) -> BenchRecord:
    st = _build_structure(sys_, alg, param, None)
    rng = random.Random(seed)
    probes: list[int] = []
    outs: list[int] = []
    t0 = time.perf_counter()
    for _ in range(queries):
        i = rng.randint(1, sys_.m)
        j = rng.randint(1, sys_.m)
        res = st.query(i, j)
        probes.append(st.meter.probes)
        outs.append(res if alg == "sdcount" else res.out)
    ms = 0.0 if time_mode == "zero" else (time.perf_counter() - t0) * 1000
    probes.sort()
    p99 = probes[min(len(probes) - 1, int(0.99 * (len(probes) - 1)))] if probes else 0
    return BenchRecord(
        structure=alg,
        param=param,
        words=st.meter.words,
        probes_mean=sum(probes) / max(len(probes), 1),
        probes_p99=p99,
        out_mean=sum(outs) / max(len(outs), 1),
        queries=queries,
        ms=ms,
    )


def cmd_bench(args) -> int:
    sys_ = load_instance(args.infile)
    algs = [a.strip() for a in args.algs.split(",") if a.strip()]
    params = [int(p) for p in args.params.split(",") if p.strip()]
    lines = [CSV_SCHEMA, CSV_COLUMNS]
    for alg in algs:
        for param in params:
            rec = _bench_one(sys_, alg, param, args.queries, args.seed, args.time_mode)
            lines.append(rec.csv_row())
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce_universe(args) -> int:
    sys_ = load_instance(args.infile)
    builder = oracle_inner_builder if args.inner == "oracle" else alg1_inner_builder
    mode = SD if args.mode == "sd" else SI
    u = args.u if args.u else sys_.u
    rs = build_reduced(
        sys_, u, args.eps, mode, builder, alpha=args.alpha, seed=args.seed
    )
    k = rs.battery.k if rs.battery else 0
    rounds = rs.battery.rounds_used if rs.battery else 0
    cls = rs.classification
    print(f"{cls.d} {cls.e} {k} {rounds} {8 * u}")
    if args.check:
        bad = 0
        for i, j in all_pairs(sys_):
            ans = rs.query(i, j)
            want = oracle_intersect(sys_, i, j)
            if ans.disjoint != want.disjoint or (
                mode == SI and ans.elements != want.elements
            ):
                bad += 1
        print(f"check {'PASS' if bad == 0 else 'FAIL'} mismatches={bad}")
        return EXIT_OK if bad == 0 else EXIT_MISMATCH
    return EXIT_OK


def cmd_reduce_quadtree(args) -> int:
    rng = random.Random(args.seed)
    universe = args.universe if args.universe else max(4, args.n * args.n)
    A = rng.sample(range(universe), args.n)
    B = rng.sample(range(universe), args.n)
    st = quadtree.ts_build(A, B, args.x, args.eps, seed=args.seed, si_mode=args.si)
    lines = []
    for lv in st.level_reports:
        lines.append(
            f"level {lv.index} Z={lv.Z} universe={lv.universe} sets={lv.sets} "
            f"elements={lv.elements} stated_sets={lv.stated_sets:.1f} "
            f"stated_sets_alt={lv.stated_sets_alt:.1f} stated_elements={lv.stated_elements:.1f}"
        )
    queries = [int(t) for t in open(args.queries).read().split()] if args.queries else []
    if not queries:
        queries = [rng.choice(A) + rng.choice(B) for _ in range(16)]
    for z in queries:
        if args.si:
            got = st.query_report(z)
            found = len(got)
        else:
            got = st.query(z)
            found = 0 if got is None else 1
        c = st.last_counters
        lines.append(f"{z} {found} {c.sd_queries} {c.false_witnesses}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce_apps(args) -> int:
    sys_ = load_instance(args.infile)
    out = args.out
    table_path = out + ".queries"
    mode_col = "report" if args.report else "decide"
    if args.kind == "rangemode":
        enc = apps.rangemode_encode(sys_)
        body = "\n".join(str(c) for c in enc.string)
        rows = []
        for i, j in all_pairs(sys_):
            (lo, hi), thr = apps.rangemode_query_range(enc, i, j)
            rows.append(f"{i} {j} {lo} {hi} {thr} {mode_col}")
    elif args.kind == "distoracle":
        enc = apps.distoracle_encode(sys_)
        edges = []
        for i in range(1, sys_.m + 1):
            for e in sys_.set_of(i):
                edges.append(f"{i} {e}")
        body = "\n".join(edges)
        rows = [f"{i} {j} 2 {mode_col}" for i, j in all_pairs(sys_)]
    elif args.kind == "threesum":
        enc = apps.threesum_encode(sys_)
        body = "\n".join(
            [str(len(enc.A))] + [str(a) for a in enc.A] + [str(b) for b in enc.B]
        )
        rows = []
        for i, j in all_pairs(sys_):
            z = apps.threesum_query_number(i, j, sys_.m, sys_.u)
            rows.append(f"{i} {j} {z} {mode_col}")
    else:
        raise ParameterError(f"unknown reduction {args.kind!r}")
    with open(out, "w") as f:
        f.write(body + "\n")
    with open(table_path, "w") as f:
        f.write("\n".join(rows) + ("\n" if rows else ""))
    print(f"reduce {args.kind} -> {out} (+ {table_path})")
    return EXIT_OK


def _parse_config_value(raw: str):
    raw = raw.strip()
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    return raw


def apply_config(args: argparse.Namespace, path: str) -> None:
    """key=value lines override parsed flags; unknown keys are rejected."""
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            if not hasattr(args, key):
                raise ParameterError(f"{path}:{lineno}: unknown config key {key!r}")
            setattr(args, key, _parse_config_value(raw))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setlab",
        description="set-intersection structures, reductions, and encoders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file overriding flags")

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--n", type=int, default=0, help="target total elements")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=("uniform", "nested"), default="uniform")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_gen)

    for name, func in (("build", cmd_build), ("query", cmd_query), ("verify", cmd_verify)):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--alg", choices=("1", "2", "3", "sdcount", "hybrid"), required=True)
        p.add_argument("--r", type=int, default=0, help="size threshold parameter")
        p.add_argument("--budget", type=int, help="hybrid space budget in words")
        if name != "build":
            p.add_argument("--pairs", help="query pairs file (default: all pairs)")
        if name == "query":
            p.add_argument("--out")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("bench", help="tradeoff sweep to CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algs", default="1,3")
    p.add_argument("--params", default="2,4,8,16,32,64,128,256")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-mode", choices=("wall", "zero"), default="wall",
                   help="zero writes a constant ms column for byte-identical replays")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("reduce", help="run one of the reductions")
    rsub = p.add_subparsers(dest="kind", required=True)

    q = rsub.add_parser("universe")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--u", type=int, default=0, help="target universe (default: instance u)")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--mode", choices=("sd", "si"), default="sd")
    q.add_argument("--alpha", type=float, default=0.75)
    q.add_argument("--inner", choices=("oracle", "alg1"), default="oracle")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--check", action="store_true", help="verify all pairs vs oracle")
    common(q)
    q.set_defaults(func=cmd_reduce_universe)

    q = rsub.add_parser("quadtree")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--queries", help="file of query sums, one per line")
    q.add_argument("--si", action="store_true", help="reporting mode")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--universe", type=int, default=0)
    q.add_argument("--out")
    common(q)
    q.set_defaults(func=cmd_reduce_quadtree)

    for kind in ("rangemode", "distoracle", "threesum"):
        q = rsub.add_parser(kind)
        q.add_argument("--in", dest="infile", required=True)
        q.add_argument("--report", action="store_true")
        q.add_argument("--out", required=True)
        q.set_defaults(func=cmd_reduce_apps, kind=kind)
        common(q)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if getattr(args, "config", None):
            apply_config(args, args.config)
        return args.func(args)
    except (ParameterError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SetLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
