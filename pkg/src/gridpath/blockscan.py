"""Cardinal scanning over the row/column bitmaps, a word at a time.

Each step loads a 64-bit window of the scan line and of the two lines beside
it.  A side line switching from blocked to free marks a forced neighbour, a
set bit on the scan line is an obstacle; the first set bit of
``forced | obstacle`` is found with one count-trailing/leading-zeros, so there
is no per-cell branching inside a word.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from . import _backend
from .canonical import is_jump_point
from .grid import Coord, Direction, GridMap


class ScanKind(enum.IntEnum):
    JUMP_POINT = 0
    DEAD_END = 1
    TARGET = 2


@dataclass(frozen=True)
class ScanResult:
    """Outcome of one scan.  ``stop`` is the last cell reached (for a dead end, the
    cell in front of the obstacle)."""

    kind: ScanKind
    stop: Coord
    steps: int
    limit_hit: bool = False


def _cardinal(direction) -> int:
    d = Direction(direction)
    if d.is_diagonal:
        raise ValueError(f"scan direction must be cardinal, got {d.name}")
    return int(d)


def _result(start, d, kind, steps, hit=False) -> ScanResult:
    dd = Direction(d)
    return ScanResult(ScanKind(kind), Coord(start[0] + dd.dx * steps, start[1] + dd.dy * steps), steps, hit)


def _target(target):
    return (-10, -10) if target is None else target


def scan(grid: GridMap, start, direction, target=None, *, backend=None) -> ScanResult:
    d = _cardinal(direction)
    k = _backend.get_kernels(backend)
    tx, ty = _target(target)
    kind, steps = k.scan(grid.row_bits, grid.col_bits, int(start[0]), int(start[1]), d, tx, ty)
    return _result(start, d, kind, steps)


def scan_limited(grid: GridMap, start, direction, target=None, limit: int = 0, *, backend=None) -> ScanResult:
    """Like :func:`scan` but travelling at most ``limit`` cells.

    The cell at ``limit + 1`` is blocked for the duration of the scan and then
    restored.  A stop on that artificial obstacle is a ``DEAD_END`` with
    ``steps == limit`` and ``limit_hit`` set.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    d = _cardinal(direction)
    k = _backend.get_kernels(backend)
    tx, ty = _target(target)
    kind, steps, hit = k.scan_limited(grid.open, grid.row_bits, grid.col_bits,
                                      int(start[0]), int(start[1]), d, tx, ty, int(limit))
    return _result(start, d, kind, steps, bool(hit))


def naive_scan(grid: GridMap, start, direction, target=None) -> ScanResult:
    """Cell-by-cell reference scanner built on the canonical successor rules."""
    d = Direction(_cardinal(direction))
    x, y = start
    steps = 0
    while True:
        nx, ny = x + d.dx, y + d.dy
        if not grid.is_traversable((nx, ny)):
            return ScanResult(ScanKind.DEAD_END, Coord(x, y), steps)
        x, y = nx, ny
        steps += 1
        if target is not None and (x, y) == tuple(target):
            return ScanResult(ScanKind.TARGET, Coord(x, y), steps)
        if is_jump_point(grid, (x, y), d):
            return ScanResult(ScanKind.JUMP_POINT, Coord(x, y), steps)
