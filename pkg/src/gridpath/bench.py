"""Benchmark harness: scenario files, dynamic obstacles, suboptimality
accounting and CSV reports comparing search configurations.

A *configuration* is an algorithm name plus variant flags, written like
``cjps-g`` or ``jps-b``.  :func:`run_suite` solves every query of every map
case with every configuration, checks each length against a Dijkstra table,
and collects one row per (configuration, query).
"""
from __future__ import annotations

import csv
import io
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .grid import Coord, GridMap, block_random
from .search import ASTAR, CJPS, JPS, SearchEngine, SearchOptions

CSV_COLUMNS = ["domain", "map", "algo", "flags", "r", "seed", "query_id", "found", "length",
               "expansions", "insertions", "hp_opt", "subopt", "propagated", "scan_steps", "time_ns"]
_INT_COLUMNS = {"seed", "query_id", "expansions", "insertions", "hp_opt", "subopt", "propagated",
                "scan_steps", "time_ns"}
_FLOAT_COLUMNS = {"r", "length"}


class ScenarioFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class AccountingError(KeyError):
    """An expansion log mentions a cell the truth table knows nothing about."""


class OptimalityError(RuntimeError):
    """A search returned a length different from the Dijkstra distance."""


# ------------------------------------------------------------ scenarios


@dataclass(frozen=True)
class ScenarioQuery:
    bucket: int
    map_name: str
    width: int
    height: int
    start: Coord
    target: Coord
    reference_length: float


def load_scen(text: str) -> list[ScenarioQuery]:
    """Parse a MovingAI ``.scen`` file (``version 1`` header, 9 tab-separated fields per row)."""
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() not in ("version 1", "version 1.0"):
        raise ScenarioFormatError("expected 'version 1' header", 1)
    out = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.rstrip("\r\n").split("\t")
        if len(fields) != 9:
            fields = raw.split()
        if len(fields) != 9:
            raise ScenarioFormatError(f"expected 9 fields, got {len(fields)}", lineno)
        try:
            bucket, w, h, sx, sy, tx, ty = (int(fields[i]) for i in (0, 2, 3, 4, 5, 6, 7))
            ref = float(fields[8])
        except ValueError as exc:
            raise ScenarioFormatError(f"bad number ({exc})", lineno) from None
        for x, y in ((sx, sy), (tx, ty)):
            if not (0 <= x < w and 0 <= y < h):
                raise ScenarioFormatError(f"coordinate {(x, y)} outside {w}x{h}", lineno)
        out.append(ScenarioQuery(bucket, fields[1], w, h, Coord(sx, sy), Coord(tx, ty), ref))
    return out


def read_scen(path) -> list[ScenarioQuery]:
    with open(path) as fh:
        return load_scen(fh.read())


def dump_scen(map_name: str, grid: GridMap, pairs, lengths=None) -> str:
    """Write query pairs as a ``.scen`` file; lengths default to the octile lower bound."""
    buf = ["version 1"]
    for i, (s, t) in enumerate(pairs):
        ref = float(lengths[i]) if lengths is not None else _octile(s, t)
        buf.append("\t".join(map(str, (i // 10, map_name, grid.width, grid.height,
                                       s[0], s[1], t[0], t[1], f"{ref:.8f}"))))
    return "\n".join(buf) + "\n"


def _octile(a, b) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dx, dy) + (math.sqrt(2) - 1) * min(dx, dy)


# ------------------------------------------------------------ dynamic maps


def simulate_dynamic(grid: GridMap, r: float, seed: int, protected: Iterable = ()) -> GridMap:
    """Copy of ``grid`` with ``floor(r * traversable)`` random free cells blocked.

    Cells in ``protected`` (typically the endpoints of the active queries) are
    never chosen.
    """
    if r == 0:
        return grid.copy()
    return block_random(grid, r, seed, protected=list(protected))


# ------------------------------------------------------------ accounting


def _exceeds(ac, ad, bc, bd):
    """Elementwise exact ``a > b`` for costs given as cardinal/diagonal arrays."""
    x, y = ac - bc, ad - bd
    return (((x >= 0) & (y >= 0) & ((x != 0) | (y != 0)))
            | ((x > 0) & (y < 0) & (x * x > 2 * y * y))
            | ((x < 0) & (y > 0) & (2 * y * y > x * x)))


def count_suboptimal(log, truth) -> tuple[int, int]:
    """Return ``(subopt, propagated)`` for an expansion log.

    ``log`` is either a list of :class:`Expansion` or the raw ``(n, 6)``
    array from :attr:`PathResult.raw_log`.  An expansion is suboptimal when
    its g exceeds the true distance; it is propagated when its parent was
    suboptimal at the time it was expanded (judged by the parent's g
    recorded in the log entry).
    """
    W, H = truth.width, truth.height
    if isinstance(log, np.ndarray):
        raw = log.reshape(-1, 6)
    else:
        rows = []
        for e in log:
            for c in (e.coord,) + ((e.parent,) if e.parent is not None else ()):
                if not (0 <= c[0] < W and 0 <= c[1] < H):
                    raise AccountingError(f"no true distance for {tuple(c)}")
            if e.parent is None:
                rows.append((e.coord[1] * W + e.coord[0], e.g.cardinals, e.g.diagonals, -1, 0, 0))
            else:
                rows.append((e.coord[1] * W + e.coord[0], e.g.cardinals, e.g.diagonals,
                             e.parent[1] * W + e.parent[0], e.parent_g.cardinals, e.parent_g.diagonals))
        raw = np.array(rows, dtype=np.int64).reshape(-1, 6)
    if len(raw) == 0:
        return 0, 0
    tc = truth.cardinals.reshape(-1)
    td = truth.diagonals.reshape(-1)
    idx, par = raw[:, 0], raw[:, 3]
    if idx.min() < 0 or idx.max() >= W * H or par.max() >= W * H:
        raise AccountingError("expansion log does not match the distance table's map")
    if (tc[idx] < 0).any():
        bad = int(idx[tc[idx] < 0][0])
        raise AccountingError(f"no true distance for {(bad % W, bad // W)}")
    sub = _exceeds(raw[:, 1], raw[:, 2], tc[idx], td[idx])
    has = par >= 0
    p = par[has]
    prop = _exceeds(raw[has, 4], raw[has, 5], tc[p], td[p])
    return int(sub.sum()), int(prop.sum())


# ------------------------------------------------------------ configurations


@dataclass(frozen=True)
class Config:
    algo: str
    opts: SearchOptions = SearchOptions()

    @property
    def flags(self) -> str:
        return self.opts.suffix if self.algo != ASTAR else ""

    @property
    def label(self) -> str:
        return self.algo + self.flags

    @classmethod
    def parse(cls, text: str) -> "Config":
        """``"cjps-g"`` -> Config("cjps", diagonal caching on)."""
        name, _, rest = text.strip().lower().partition("-")
        if name not in (ASTAR, JPS, CJPS):
            raise ValueError(f"unknown algorithm {name!r}")
        opts = SearchOptions.parse(rest)
        if name == ASTAR and opts.flags:
            raise ValueError("variant flags only apply to jps and cjps")
        return cls(name, opts)


@dataclass
class MapCase:
    name: str
    grid: GridMap
    queries: list
    domain: str = "synthetic"
    r: float = 0.0
    seed: int = 0


# ------------------------------------------------------------ report


@dataclass
class SuiteReport:
    rows: list = field(default_factory=list)

    def labels(self) -> list[str]:
        seen = []
        for row in self.rows:
            lab = row["algo"] + row["flags"]
            if lab not in seen:
                seen.append(lab)
        return seen

    def maps(self) -> list[str]:
        seen = []
        for row in self.rows:
            if row["map"] not in seen:
                seen.append(row["map"])
        return seen

    def _by_query(self, label: str, map_name: str | None = None) -> dict:
        out = {}
        for row in self.rows:
            if row["algo"] + row["flags"] != label:
                continue
            if map_name is not None and row["map"] != map_name:
                continue
            out[(row["map"], row["query_id"])] = row
        return out

    def paired(self, baseline: str, candidate: str, map_name: str | None = None):
        """Row pairs for queries both configurations solved."""
        a = self._by_query(baseline, map_name)
        b = self._by_query(candidate, map_name)
        keys = [k for k in a if k in b and a[k]["found"] and b[k]["found"]]
        return [(a[k], b[k]) for k in keys]

    def total(self, label: str, metric: str, map_name: str | None = None) -> float:
        return sum(row[metric] for row in self._by_query(label, map_name).values())

    def factor(self, metric: str, baseline: str, candidate: str, map_name: str | None = None) -> float:
        """``sum(metric of baseline) / sum(metric of candidate)``; >1 favours the candidate."""
        pairs = self.paired(baseline, candidate, map_name)
        num = sum(a[metric] for a, _ in pairs)
        den = sum(b[metric] for _, b in pairs)
        if den == 0:
            return math.nan if num == 0 else math.inf
        return num / den

    def proportion(self, label: str, metric: str = "subopt", of: str = "expansions",
                   map_name: str | None = None) -> float:
        den = self.total(label, of, map_name)
        return self.total(label, metric, map_name) / den if den else 0.0

    def tpe(self, label: str, map_name: str | None = None) -> float:
        """Time per expansion in microseconds."""
        exp = self.total(label, "expansions", map_name)
        return self.total(label, "time_ns", map_name) / exp / 1000.0 if exp else math.nan

    def quantiles(self, metric: str, baseline: str, candidate: str, map_name: str | None = None):
        """min/25/50/75/max of per-query ratios baseline/candidate."""
        ratios = [a[metric] / b[metric] for a, b in self.paired(baseline, candidate, map_name)
                  if b[metric] > 0]
        if not ratios:
            return None
        return tuple(float(q) for q in np.percentile(ratios, [0, 25, 50, 75, 100]))

    def factor_table(self, baseline: str, candidate: str) -> str:
        """Plain-text table of improvement factors, overall and per map."""
        lines = [f"improvement factors {baseline} / {candidate} (>1 favours {candidate})"]
        head = f"{'map':<24}{'hp-opt':>9}{'subopt':>9}{'expd':>9}{'runtime':>9}  tpe (us) {baseline}/{candidate}"
        lines.append(head)
        for name in [None] + self.maps():
            label = "ALL" if name is None else name
            tpe_a, tpe_b = self.tpe(baseline, name), self.tpe(candidate, name)
            tpe_f = tpe_a / tpe_b if tpe_b else math.nan
            lines.append(f"{label:<24}{_fmt(self.factor('hp_opt', baseline, candidate, name)):>9}"
                         f"{_fmt(self.factor('subopt', baseline, candidate, name)):>9}"
                         f"{_fmt(self.factor('expansions', baseline, candidate, name)):>9}"
                         f"{_fmt(self.factor('time_ns', baseline, candidate, name)):>9}"
                         f"  {_fmt(tpe_f)} ({_fmt(tpe_a)}/{_fmt(tpe_b)})")
        lines.append("")
        lines.append(f"per-query runtime ratio quantiles ({'min':>6} {'25%':>6} {'50%':>6} {'75%':>6} {'max':>6})")
        for name in self.maps():
            q = self.quantiles("time_ns", baseline, candidate, name)
            cells = " ".join(f"{_fmt(v):>6}" for v in q) if q else "   n/a"
            lines.append(f"{name:<24}{cells}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            out = dict(row)
            out["found"] = int(row["found"])
            out["r"] = repr(float(row["r"]))
            out["length"] = repr(float(row["length"]))
            w.writerow(out)
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "SuiteReport":
        rows = []
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for raw in reader:
            rows.append(_typed_row(raw))
        return cls(rows)


def _typed_row(raw: dict) -> dict:
    row = {}
    for k in CSV_COLUMNS:
        v = raw[k]
        if k in _INT_COLUMNS:
            row[k] = int(v)
        elif k in _FLOAT_COLUMNS:
            row[k] = float(v)
        elif k == "found":
            row[k] = v not in ("0", "false", "False", "")
        else:
            row[k] = v
    return row


def _fmt(x: float) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "---"
    if math.isinf(x):
        return "inf"
    return f"{x:.2f}"


# ------------------------------------------------------------ running


def _solve_case(case: MapCase, configs: list, verify: bool, count_subopt: bool, backend):
    """Count run for one map: metrics, verification and suboptimality per query."""
    engine = SearchEngine(case.grid, backend)
    need_truth = verify or count_subopt
    rows = []
    for qid, (s, t) in enumerate(case.queries):
        truth = engine.dijkstra_table(s) if need_truth else None
        for cfg in configs:
            opts = SearchOptions(cfg.opts.diagonal_caching, cfg.opts.backwards_scanning,
                                 cfg.opts.intersection_pruning, record_log=count_subopt)
            res = engine.search(cfg.algo, s, t, opts)
            if verify and res.length != truth[t]:
                raise OptimalityError(
                    f"{cfg.label} on map {case.name} query {qid} {tuple(s)}->{tuple(t)}: "
                    f"returned {res.length} ({float(res.length):.6f}), "
                    f"Dijkstra says {truth[t]} ({float(truth[t]):.6f})")
            sub = prop = 0
            if count_subopt:
                sub, prop = count_suboptimal(res.raw_log, truth)
            m = res.metrics
            rows.append({
                "domain": case.domain, "map": case.name, "algo": cfg.algo, "flags": cfg.flags,
                "r": float(case.r), "seed": int(case.seed), "query_id": qid, "found": m.found,
                "length": float(m.length), "expansions": m.expansions, "insertions": m.insertions,
                "hp_opt": m.hp_opt, "subopt": sub, "propagated": prop, "scan_steps": m.scan_steps,
                "time_ns": m.time_ns,
            })
    return rows


def _time_case(case: MapCase, configs: list, repetitions: int, warmup: bool, seed: int, backend):
    """Median wall time per (configuration, query), cells run in shuffled order."""
    engine = SearchEngine(case.grid, backend)
    cells = [(ci, qi) for ci in range(len(configs)) for qi in range(len(case.queries))]
    rng = random.Random(seed)
    samples = {c: [] for c in cells}
    runs = repetitions + (1 if warmup else 0)
    for rep in range(runs):
        order = cells[:]
        rng.shuffle(order)
        for ci, qi in order:
            s, t = case.queries[qi]
            res = engine.search(configs[ci].algo, s, t, configs[ci].opts)
            if warmup and rep == 0:
                continue
            samples[(ci, qi)].append(res.metrics.time_ns)
    return {c: int(statistics.median(v)) for c, v in samples.items()}


def run_suite(cases: list, algorithms, repetitions: int = 1, *, warmup: bool = True,
              verify: bool = True, count_subopt: bool = True, jobs: int = 1,
              backend: Optional[str] = None, seed: int = 0, progress=None,
              timing: bool = True) -> SuiteReport:
    """Solve every query of every case with every configuration.

    Counts come from one recorded run per cell; wall time is the median of
    ``repetitions`` further runs (after a discarded warm-up), always executed
    sequentially.  With ``timing=False`` the timed runs are skipped and
    ``time_ns`` is that of the counting run.  Any length that differs from the Dijkstra distance raises
    :class:`OptimalityError`.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    configs = [a if isinstance(a, Config) else Config.parse(a) for a in algorithms]
    labels = [c.label for c in configs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate configurations in {labels}")
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_solve_case, c, configs, verify, count_subopt, backend) for c in cases]
            per_case = [f.result() for f in futures]
    else:
        per_case = []
        for c in cases:
            per_case.append(_solve_case(c, configs, verify, count_subopt, backend))
            if progress:
                progress(c.name)
    rows = []
    for case, case_rows in zip(cases, per_case):
        times = _time_case(case, configs, repetitions, warmup, seed, backend) if timing else None
        nq = len(case.queries)
        for k, row in enumerate(case_rows):
            ci, qi = k % len(configs), k // len(configs)
            if times is not None:
                row["time_ns"] = times[(ci, qi)]
            assert row["query_id"] == qi and row["algo"] + row["flags"] == labels[ci]
        rows.extend(case_rows)
        assert len(case_rows) == nq * len(configs)
    return SuiteReport(rows)


def synthetic_cases(s: int, b: float, r: float, seeds, n_queries: int = 100) -> list[MapCase]:
    """Synthetic maps with clustered queries, one case per seed."""
    from .grid import gen_clustered_queries, gen_synthetic
    out = []
    for seed in seeds:
        grid = gen_synthetic(s, b, r, seed)
        out.append(MapCase(f"syn-s{s}-b{b:g}-r{r:g}-{seed}", grid,
                           gen_clustered_queries(grid, n_queries, seed), "synthetic", r, seed))
    return out
