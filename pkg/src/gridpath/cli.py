"""Command-line front end: ``gridpath {run,gen,bench,verify}``.

Seeds: an explicit ``seed=`` / ``--seed`` wins, then ``GRIDPATH_SEED``; if
neither is given a seed is drawn and printed to stderr so the run can be
repeated.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import time

import numpy as np

from . import _backend
from .bench import (Config, MapCase, OptimalityError, ScenarioFormatError, dump_scen, read_scen,
                    run_suite, simulate_dynamic)
from .grid import (Coord, MapFormatError, gen_clustered_queries, gen_maze, gen_synthetic,
                   read_map, write_map)

DEFAULT_QUERIES = 100
ALL_CONFIGS = ["astar"] + [a + f for a in ("jps", "cjps") for f in ("", "-g", "-b", "-i", "-g-b-i")]


class UsageError(Exception):
    pass


def _env_seed():
    raw = os.environ.get("GRIDPATH_SEED")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GRIDPATH_SEED must be an integer, got {raw!r}") from None


def resolve_seed(explicit):
    """Explicit seed, else the environment, else a fresh one (announced on stderr)."""
    if explicit is not None:
        return int(explicit)
    env = _env_seed()
    if env is not None:
        return env
    seed = random.SystemRandom().randrange(2**31)
    print(f"seed={seed}", file=sys.stderr)
    return seed


def _seed_list(text: str) -> list[int]:
    out = []
    for part in text.split("+"):
        lo, dash, hi = part.partition("-")
        out.extend(range(int(lo), int(hi) + 1) if dash else [int(lo)])
    return out


def parse_synthetic(text: str) -> dict:
    """``"s=64,b=0.75,r=0.01,seed=7"`` -> dict.  ``seed`` may be a range like ``0-19``."""
    params = {"s": 512, "b": 0.75, "r": 0.0, "seed": None}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, eq, val = item.partition("=")
        if not eq or key not in params:
            raise UsageError(f"bad synthetic parameter {item!r} (expected s=, b=, r=, seed=)")
        try:
            if key == "s":
                params[key] = int(val)
            elif key == "seed":
                params[key] = _seed_list(val)
            else:
                params[key] = float(val)
        except ValueError:
            raise UsageError(f"bad value in {item!r}") from None
    return params


def _parse_maze(text: str) -> dict:
    params = {"cols": 64, "rows": 64, "seed": None}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, eq, val = item.partition("=")
        if not eq or key not in params:
            raise UsageError(f"bad maze parameter {item!r} (expected cols=, rows=, seed=)")
        params[key] = int(val)
    return params


def _configs(text: str) -> list[Config]:
    names = ALL_CONFIGS if text == "all" else [t for t in text.split(",") if t]
    try:
        return [Config.parse(n) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _random_pairs(grid, n, seed):
    free = np.argwhere(grid.cells)
    if len(free) == 0:
        raise UsageError("map has no traversable cells")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, len(free), size=n)
    b = rng.integers(0, len(free), size=n)
    return [(Coord(int(free[i][1]), int(free[i][0])), Coord(int(free[j][1]), int(free[j][0])))
            for i, j in zip(a, b)]


def build_cases(args) -> list[MapCase]:
    """Map cases from ``--map``/``--scen`` or ``--synthetic``, with optional ``--dynamic``."""
    if bool(args.map) == bool(args.synthetic):
        raise UsageError("give exactly one of --map or --synthetic")
    if args.scen and not args.map:
        raise UsageError("--scen needs --map")
    n = args.queries if args.queries is not None else DEFAULT_QUERIES
    if n < 1:
        raise UsageError("--queries must be positive")
    cases = []
    if args.synthetic:
        params = parse_synthetic(args.synthetic)
        seeds = params["seed"] or [resolve_seed(args.seed)]
        for seed in seeds:
            try:
                grid = gen_synthetic(params["s"], params["b"], params["r"], seed)
                pairs = gen_clustered_queries(grid, n, seed)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            name = f"syn-s{params['s']}-b{params['b']:g}-r{params['r']:g}-{seed}"
            cases.append(MapCase(name, grid, pairs, "synthetic", params["r"], seed))
    else:
        grid = read_map(args.map)
        name = os.path.splitext(os.path.basename(args.map))[0]
        if args.scen:
            qs = read_scen(args.scen)
            if args.queries is not None:
                qs = qs[:args.queries]
            for q in qs:
                if (q.width, q.height) != (grid.width, grid.height):
                    raise UsageError(f"{args.scen}: query size {q.width}x{q.height} "
                                     f"does not match map {grid.width}x{grid.height}")
            pairs = [(q.start, q.target) for q in qs]
            seed = args.seed if args.seed is not None else 0
        else:
            seed = resolve_seed(args.seed)
            pairs = _random_pairs(grid, n, seed)
        for s, t in pairs:
            for c in (s, t):
                if not grid.is_traversable(c):
                    raise UsageError(f"query endpoint {tuple(c)} is not traversable")
        cases.append(MapCase(name, grid, pairs, "map", 0.0, seed))
    if args.dynamic:
        out = []
        for c in cases:
            protected = {p for pair in c.queries for p in pair}
            grid = simulate_dynamic(c.grid, args.dynamic, c.seed, protected)
            out.append(MapCase(f"{c.name}-dyn{args.dynamic:g}", grid, c.queries, c.domain,
                               args.dynamic, c.seed))
        cases = out
    return cases


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ subcommands


def cmd_run(args) -> int:
    cases = build_cases(args)
    configs = _configs(args.algo)
    try:
        report = run_suite(cases, configs, repetitions=args.repetitions, warmup=False,
                           verify=args.verify, count_subopt=args.subopt, jobs=args.jobs)
    except OptimalityError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    _emit(report.to_csv(), args.out)
    if args.verify:
        n = len(report.rows)
        print(f"verified {n}/{n} optimal")
    return 0


def cmd_gen(args) -> int:
    if bool(args.synthetic) == bool(args.maze):
        raise UsageError("give exactly one of --synthetic or --maze")
    if args.synthetic:
        params = parse_synthetic(args.synthetic)
        seeds = params["seed"] or [resolve_seed(args.seed)]
        if len(seeds) != 1:
            raise UsageError("gen writes one map; give a single seed")
        seed = seeds[0]
        try:
            grid = gen_synthetic(params["s"], params["b"], params["r"], seed)
            pairs = gen_clustered_queries(grid, args.queries, seed) if args.queries else []
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        params = _parse_maze(args.maze)
        seed = params["seed"] if params["seed"] is not None else resolve_seed(args.seed)
        grid = gen_maze(params["cols"], params["rows"], seed)
        pairs = _random_pairs(grid, args.queries, seed) if args.queries else []
    write_map(grid, args.out)
    print(f"wrote {args.out} ({grid.width}x{grid.height}, {grid.traversable_count()} traversable)")
    if pairs:
        scen_path = os.path.splitext(args.out)[0] + ".scen"
        with open(scen_path, "w") as fh:
            fh.write(dump_scen(os.path.basename(args.out), grid, pairs))
        print(f"wrote {scen_path} ({len(pairs)} queries)")
    return 0


def cmd_bench(args) -> int:
    cases = build_cases(args)
    base = Config.parse(args.baseline)
    cand = Config.parse(args.candidate)
    configs = [base] if base == cand else [base, cand]
    t0 = time.perf_counter()
    try:
        report = run_suite(cases, configs, repetitions=args.repetitions, warmup=not args.no_warmup,
                           verify=True, count_subopt=True, jobs=args.jobs)
    except OptimalityError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 1
    if args.out:
        report.write_csv(args.out)
    print(report.factor_table(base.label, cand.label))
    print(f"\n{len(cases)} map(s), {len(report.rows)} rows, backend {_backend.BACKEND}, "
          f"{time.perf_counter() - t0:.1f}s")
    return 0


def cmd_verify(args) -> int:
    from .blockscan import naive_scan, scan
    from .canonical import validate_tables
    from .grid import CARDINALS

    ok = True
    bad = validate_tables()
    print(f"successor tables: {2304 - len(bad)}/2304 match the brute-force rules")
    ok &= not bad

    cases = build_cases(args) if (args.map or args.synthetic) else []
    seed = resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    if not cases:
        for i in range(args.maps):
            w, h = (int(v) for v in rng.integers(16, 129, size=2))
            density = float(rng.uniform(0.0, 0.35))
            from .grid import GridMap
            grid = GridMap(w, h, rng.random((h, w)) >= density)
            free = np.argwhere(grid.cells)
            if len(free) < 2:
                continue
            cases.append(MapCase(f"random-{i}", grid, _random_pairs(grid, args.queries or 5, seed + i),
                                 "random", density, seed + i))

    probes = mism = 0
    for c in cases:
        free = np.argwhere(c.grid.cells)
        for _ in range(args.probes // max(1, len(cases))):
            y, x = free[rng.integers(len(free))]
            d = CARDINALS[rng.integers(4)]
            probes += 1
            if scan(c.grid, (int(x), int(y)), d) != naive_scan(c.grid, (int(x), int(y)), d):
                mism += 1
    print(f"block scan: {probes - mism}/{probes} probes match the cell-by-cell scanner")
    ok &= mism == 0

    configs = _configs(args.algo)
    try:
        report = run_suite(cases, configs, warmup=False, verify=True, count_subopt=False, jobs=args.jobs)
        n = len(report.rows)
        print(f"verified {n}/{n} optimal")
    except OptimalityError as exc:
        print(f"verification failed: {exc}")
        ok = False
    return 0 if ok else 1


# ------------------------------------------------------------ parser


def _add_sources(p, queries_default=None):
    p.add_argument("--map", help="MovingAI .map file")
    p.add_argument("--scen", help="MovingAI .scen file for --map")
    p.add_argument("--synthetic", metavar="PARAMS",
                   help="synthetic map parameters, e.g. s=512,b=0.75,r=0.001,seed=0 (seed may be a range 0-19)")
    p.add_argument("--queries", type=int, default=queries_default,
                   help=f"number of generated queries (default {DEFAULT_QUERIES})")
    p.add_argument("--dynamic", type=float, default=0.0, metavar="R",
                   help="block this fraction of free cells before solving (endpoints protected)")
    p.add_argument("--seed", type=int, help="fallback seed (overrides GRIDPATH_SEED)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for counting runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridpath", description="Optimal grid pathfinding with JPS and CJPS.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve queries and print one CSV row per query")
    _add_sources(p)
    p.add_argument("--algo", default="cjps", help="configuration(s), comma separated, e.g. jps,cjps-g; or 'all'")
    p.add_argument("--verify", action="store_true", help="check every length against Dijkstra")
    p.add_argument("--subopt", action="store_true", help="also count suboptimal expansions")
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="write a synthetic map or maze (plus a .scen)")
    p.add_argument("--synthetic", metavar="PARAMS", help="s=..,b=..,r=..,seed=..")
    p.add_argument("--maze", metavar="PARAMS", help="cols=..,rows=..,seed=..")
    p.add_argument("--queries", type=int, default=DEFAULT_QUERIES,
                   help=f"queries written to the .scen (default {DEFAULT_QUERIES}, 0 for none)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output .map path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="compare two configurations and print improvement factors")
    _add_sources(p)
    p.add_argument("--baseline", default="jps")
    p.add_argument("--candidate", default="cjps")
    p.add_argument("--repetitions", type=int, default=10, help="timed runs per cell; the median is kept")
    p.add_argument("--no-warmup", action="store_true")
    p.add_argument("--out", help="also write per-query CSV here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="self-check tables, scanning and optimality")
    _add_sources(p, queries_default=None)
    p.add_argument("--algo", default="all")
    p.add_argument("--maps", type=int, default=20, help="random maps when no map source is given")
    p.add_argument("--probes", type=int, default=2000)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gridpath: error: {exc}", file=sys.stderr)
        return 2
    except (MapFormatError, ScenarioFormatError) as exc:
        path = getattr(args, "scen", None) if isinstance(exc, ScenarioFormatError) else getattr(args, "map", None)
        print(f"gridpath: {path}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gridpath: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
