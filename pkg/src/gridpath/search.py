"""A*, Dijkstra, JPS and constrained JPS over a :class:`GridMap`.

The heavy lifting happens in the kernel backend (compiled when available);
this module converts between the public types and the flat indices the
kernels work with.  An engine is bound to one map object and keeps its
scratch arrays between queries, so reuse :class:`SearchEngine` when running
many queries on the same map.  Mutating the map in place (``block`` /
``set_obstacle``) is seen by an existing engine.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _backend
from .canonical import CORNER_TABLE, SUCC_TABLE
from .grid import (INFINITY, ZERO, Coord, Cost, Direction, GridMap, can_step,
                   octile_distance)
from .metrics import QueryMetrics

ASTAR, JPS, CJPS = "astar", "jps", "cjps"
_ALGO_CODES = {ASTAR: 0, JPS: 1, CJPS: 2}


class SearchError(RuntimeError):
    """Raised when the engine produces something that cannot be a valid path."""


@dataclass(frozen=True)
class SearchOptions:
    diagonal_caching: bool = False      # -g
    backwards_scanning: bool = False    # -b
    intersection_pruning: bool = False
    record_log: bool = False

    @property
    def flags(self) -> int:
        return (int(self.diagonal_caching) | int(self.backwards_scanning) << 1
                | int(self.intersection_pruning) << 2)

    @property
    def suffix(self) -> str:
        s = ""
        if self.diagonal_caching:
            s += "-g"
        if self.backwards_scanning:
            s += "-b"
        if self.intersection_pruning:
            s += "-i"
        return s

    @classmethod
    def parse(cls, text: str, record_log: bool = False) -> "SearchOptions":
        """Build options from a flag string such as ``"-g-b"`` or ``"gb"``."""
        t = text.replace("-", "").strip()
        unknown = set(t) - set("gbi")
        if unknown:
            raise ValueError(f"unknown variant flags {''.join(sorted(unknown))!r}")
        return cls("g" in t, "b" in t, "i" in t, record_log)


class Expansion(NamedTuple):
    coord: Coord
    g: Cost
    parent: Optional[Coord]
    parent_g: Optional[Cost]


@dataclass
class PathResult:
    found: bool
    length: Cost
    jump_points: list = field(default_factory=list)
    full_path: list = field(default_factory=list)
    metrics: QueryMetrics = field(default_factory=QueryMetrics)
    # expansion log as an (n, 6) int64 array: idx, g, parent idx, parent g
    # (costs as cardinal/diagonal column pairs, parent -1 for the start)
    raw_log: Optional[np.ndarray] = None
    width: int = 0

    @property
    def log(self) -> Optional[list]:
        """Expansion log as :class:`Expansion` tuples, or None if not recorded."""
        if self.raw_log is None:
            return None
        W = self.width
        out = []
        for idx, egc, egd, par, pgc, pgd in self.raw_log.tolist():
            if par < 0:
                out.append(Expansion(Coord(idx % W, idx // W), Cost(egc, egd), None, None))
            else:
                out.append(Expansion(Coord(idx % W, idx // W), Cost(egc, egd),
                                     Coord(par % W, par // W), Cost(pgc, pgd)))
        return out


class DistanceTable:
    """Exact distances from one source; unreachable cells map to ``INFINITY``."""

    def __init__(self, width, height, source, cardinals, diagonals):
        self.width = width
        self.height = height
        self.source = Coord(*source)
        self.cardinals = np.asarray(cardinals, dtype=np.int64).reshape(height, width)
        self.diagonals = np.asarray(diagonals, dtype=np.int64).reshape(height, width)

    def __getitem__(self, coord) -> Cost:
        x, y = coord
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise KeyError(coord)
        c = int(self.cardinals[y, x])
        if c < 0:
            return INFINITY
        return Cost(c, int(self.diagonals[y, x]))

    def __contains__(self, coord) -> bool:
        x, y = coord
        return 0 <= x < self.width and 0 <= y < self.height

    def reachable(self, coord) -> bool:
        return self[coord] != INFINITY


class SearchEngine:
    def __init__(self, grid: GridMap, backend: str | None = None):
        self.grid = grid
        self.kernels = _backend.get_kernels(backend)
        self.backend = self.kernels.BACKEND
        self._engine = self.kernels.Engine(grid.open, grid.row_bits, grid.col_bits,
                                           grid.width, grid.height, SUCC_TABLE, CORNER_TABLE)

    def _check(self, coord, what):
        if not self.grid.in_bounds(coord):
            raise ValueError(f"{what} {tuple(coord)} is outside the map")
        if not self.grid.is_traversable(coord):
            raise ValueError(f"{what} {tuple(coord)} is not traversable")

    def search(self, algo: str, start, target, opts: SearchOptions | None = None) -> PathResult:
        if algo not in _ALGO_CODES:
            raise ValueError(f"unknown algorithm {algo!r}")
        opts = opts or SearchOptions()
        self._check(start, "start")
        self._check(target, "target")
        flags = opts.flags if algo != ASTAR else 0
        t0 = time.perf_counter_ns()
        found, gc, gd, path, stats, log = self._engine.search(
            _ALGO_CODES[algo], int(start[0]), int(start[1]), int(target[0]), int(target[1]),
            flags, bool(opts.record_log))
        elapsed = time.perf_counter_ns() - t0
        W = self.grid.width
        length = Cost(gc, gd) if found else INFINITY
        metrics = QueryMetrics(expansions=stats["expansions"], insertions=stats["insertions"],
                               scan_steps=stats["scan_steps"], time_ns=elapsed, length=length,
                               found=bool(found), pruned=stats["pruned"], labels=stats["labels"])
        jump_points = [Coord(i % W, i // W) for i in path]
        full = expand_path(self.grid, jump_points) if found else []
        if found and path_cost(full) != length:
            raise SearchError(f"path cost {path_cost(full)} differs from reported length {length}")
        raw = None
        if log is not None:
            raw = np.array(log, dtype=np.int64).reshape(-1, 6)
        return PathResult(bool(found), length, jump_points, full, metrics, raw, W)

    def astar(self, start, target, opts=None):
        return self.search(ASTAR, start, target, opts)

    def jps(self, start, target, opts=None):
        return self.search(JPS, start, target, opts)

    def cjps(self, start, target, opts=None):
        return self.search(CJPS, start, target, opts)

    def dijkstra_table(self, source) -> DistanceTable:
        self._check(source, "source")
        dc, dd = self._engine.dijkstra(int(source[0]), int(source[1]))
        return DistanceTable(self.grid.width, self.grid.height, source, dc, dd)


def astar(grid: GridMap, start, target, opts: SearchOptions | None = None) -> PathResult:
    return SearchEngine(grid).astar(start, target, opts)


def jps(grid: GridMap, start, target, opts: SearchOptions | None = None) -> PathResult:
    return SearchEngine(grid).jps(start, target, opts)


def cjps(grid: GridMap, start, target, opts: SearchOptions | None = None) -> PathResult:
    return SearchEngine(grid).cjps(start, target, opts)


def dijkstra_table(grid: GridMap, source) -> DistanceTable:
    return SearchEngine(grid).dijkstra_table(source)


def compute_L(g_a: Cost, g_v: Cost, dist_av: int) -> int:
    """How many diagonal steps a constraint built from ``(a, v)`` stays applicable."""
    if dist_av < 1:
        raise ValueError("dist_av must be at least 1")
    if g_a.infinite or g_v.infinite:
        raise ValueError("costs must be finite")
    return _backend.kernels.compute_limit(g_a.cardinals, g_a.diagonals,
                                          g_v.cardinals, g_v.diagonals, int(dist_av))


def estimate_gbar(stored_g: Cost, dist_vpprime, g_v: Cost = ZERO) -> Cost:
    """Upper bound on g at a blocked-scan stop ``p``.

    ``dist_vpprime`` is the octile cost from ``v`` to ``p'`` (an int is read as
    that many cardinal steps).  ``g_v`` is the g-value of ``v``; the detour
    ``v -> p' -> p`` costs ``g_v + |vp'| + 1``.
    """
    if not isinstance(dist_vpprime, Cost):
        if dist_vpprime < 0:
            raise ValueError("distance must be non-negative")
        dist_vpprime = Cost(int(dist_vpprime), 0)
    detour = g_v + dist_vpprime + Cost(1, 0)
    return stored_g if stored_g < detour else detour


def path_cost(path) -> Cost:
    c = d = 0
    for a, b in zip(path, path[1:]):
        if a[0] != b[0] and a[1] != b[1]:
            d += 1
        else:
            c += 1
    return Cost(c, d)


_DIR_OF_STEP = {(d.dx, d.dy): d for d in Direction}


def expand_path(grid: GridMap, jump_points) -> list:
    """Fill in the cells between consecutive jump points.

    Each segment is walked diagonally first and then straight; every move is
    checked for legality, so a segment that cannot be walked that way raises
    :class:`SearchError`.
    """
    pts = [Coord(*p) for p in jump_points]
    if not pts:
        return []
    out = [pts[0]]
    for a, b in zip(pts, pts[1:]):
        x, y = a
        dx, dy = b[0] - x, b[1] - y
        sx, sy = (dx > 0) - (dx < 0), (dy > 0) - (dy < 0)
        n_diag = min(abs(dx), abs(dy))
        moves = [(sx, sy)] * n_diag
        rest = abs(dx) - n_diag if abs(dx) > abs(dy) else abs(dy) - n_diag
        straight = (sx, 0) if abs(dx) > abs(dy) else (0, sy)
        moves += [straight] * rest
        for mx, my in moves:
            d = _DIR_OF_STEP[mx, my]
            if not can_step(grid, (x, y), d):
                raise SearchError(f"segment {tuple(a)} -> {tuple(b)} is not walkable at {(x, y)}")
            x, y = x + mx, y + my
            out.append(Coord(x, y))
    return out


__all__ = ["ASTAR", "JPS", "CJPS", "SearchOptions", "SearchEngine", "SearchError", "PathResult",
           "Expansion", "DistanceTable", "astar", "jps", "cjps", "dijkstra_table", "compute_L",
           "estimate_gbar", "expand_path", "path_cost"]
