"""Diagonal-first (canonical) successor rules.

A 3x3 neighbourhood is encoded as an 8-bit mask: bit ``k`` is set when the
neighbour in :class:`Direction` ``k`` is traversable.  Successor sets are
8-bit masks over directions too.  The tables below are built from the usual
natural/forced-neighbour rules and can be checked against
:func:`reference_successors`, a brute-force evaluation of the diagonal-first
definition over all paths inside the neighbourhood.
"""
from __future__ import annotations

import heapq
from typing import Iterable

import numpy as np

from .grid import CARDINALS, Cost, Direction, GridMap

START = None
# table row used for the start node (no incoming direction)
START_ROW = 8


def _bit(d) -> int:
    return 1 << int(d)


def _open(mask: int, d) -> bool:
    return bool(mask & (1 << int(d)))


def legal_moves(mask: int) -> int:
    """Moves from the centre allowed by the mask (no corner cutting)."""
    out = 0
    for d in Direction:
        if not _open(mask, d):
            continue
        if d.is_diagonal and not all(_open(mask, c) for c in d.components):
            continue
        out |= _bit(d)
    return out


def arrival_legal(mask: int, incoming: Direction) -> bool:
    """Whether the centre can be entered by a move in ``incoming``."""
    if not _open(mask, incoming.opposite):
        return False
    if incoming.is_diagonal:
        return all(_open(mask, c.opposite) for c in incoming.components)
    return True


def _diag_between(a: Direction, b: Direction) -> Direction:
    dx, dy = a.dx + b.dx, a.dy + b.dy
    for d in Direction:
        if d.dx == dx and d.dy == dy:
            return d
    raise ValueError((a, b))


def _rule_successors(incoming, mask: int) -> int:
    legal = legal_moves(mask)
    if incoming is None:
        return legal
    incoming = Direction(incoming)
    if not arrival_legal(mask, incoming):
        return 0
    if incoming.is_diagonal:
        out = _bit(incoming)
        for c in incoming.components:
            out |= _bit(c)
        return out & legal
    out = _bit(incoming)
    back = incoming.opposite
    for side in (Direction((incoming + 2) % 8), Direction((incoming + 6) % 8)):
        # forced when the cell beside us is free but the one beside our parent is not
        if _open(mask, side) and not _open(mask, _diag_between(side, back)):
            out |= _bit(side) | _bit(_diag_between(side, incoming))
    return out & legal


def _build_tables():
    succ = np.zeros((9, 256), dtype=np.uint8)
    for mask in range(256):
        for d in Direction:
            succ[int(d), mask] = _rule_successors(d, mask)
        succ[START_ROW, mask] = _rule_successors(None, mask)
    # jump point: scanning in cardinal d yields a successor other than going straight
    jump = np.zeros((8, 256), dtype=np.uint8)
    corner = np.zeros(256, dtype=np.uint8)
    for mask in range(256):
        for d in CARDINALS:
            if int(succ[int(d), mask]) & ~_bit(d):
                jump[int(d), mask] = 1
                corner[mask] = 1
    return succ, jump, corner


SUCC_TABLE, JUMP_TABLE, CORNER_TABLE = _build_tables()


def _row(incoming) -> int:
    return START_ROW if incoming is None else int(incoming)


def mask_to_dirs(mask: int) -> frozenset[Direction]:
    return frozenset(d for d in Direction if mask & (1 << int(d)))


def dirs_to_mask(dirs: Iterable[Direction]) -> int:
    out = 0
    for d in dirs:
        out |= _bit(d)
    return out


def neighborhood_mask(grid: GridMap, coord) -> int:
    x, y = coord
    op = grid.open
    mask = 0
    for d in Direction:
        if op[y + 1 + d.dy, x + 1 + d.dx]:
            mask |= 1 << int(d)
    return mask


def successors(grid: GridMap, coord, incoming=START) -> frozenset[Direction]:
    """Diagonal-first successor directions of ``coord`` entered via ``incoming``."""
    return mask_to_dirs(int(SUCC_TABLE[_row(incoming), neighborhood_mask(grid, coord)]))


def is_jump_point(grid: GridMap, coord, incoming: Direction) -> bool:
    """Straight travel in ``incoming`` must stop here: a non-straight successor exists.

    This equals ``len(successors) > 1`` except when the cell ahead is blocked and
    the only successor is a forced turn; that cell still has to be expanded.
    """
    incoming = Direction(incoming)
    if incoming.is_diagonal:
        raise ValueError("jump points are defined for cardinal travel")
    return bool(JUMP_TABLE[int(incoming), neighborhood_mask(grid, coord)])


def is_corner_point(grid: GridMap, coord) -> bool:
    return bool(CORNER_TABLE[neighborhood_mask(grid, coord)])


def intersect_successors(grid: GridMap, coord, incomings) -> frozenset[Direction]:
    incomings = list(incomings)
    if not incomings:
        raise ValueError("need at least one incoming direction")
    mask = neighborhood_mask(grid, coord)
    out = 0xFF
    for d in incomings:
        out &= int(SUCC_TABLE[_row(d), mask])
    return mask_to_dirs(out)


# ------------------------------------------------------------ brute force

def _cell_open(mask: int, cell) -> bool:
    if cell == (0, 0):
        return True
    for d in Direction:
        if (d.dx, d.dy) == cell:
            return _open(mask, d)
    return False


def _local_edges(mask: int, verts):
    """Legal moves between vertices of the local graph, with corner-cut checks."""
    edges = {v: [] for v in verts}
    for u in verts:
        for v in verts:
            dx, dy = v[0] - u[0], v[1] - u[1]
            if (dx, dy) == (0, 0) or abs(dx) > 1 or abs(dy) > 1:
                continue
            if dx and dy:
                if not (_cell_open(mask, (u[0] + dx, u[1])) and _cell_open(mask, (u[0], u[1] + dy))):
                    continue
                edges[u].append((v, Cost(0, 1), True))
            else:
                edges[u].append((v, Cost(1, 0), False))
    return edges


def reference_successors(incoming, mask: int) -> int:
    """Successor mask by direct evaluation of the diagonal-first definition.

    The local graph holds the centre and every neighbour reachable from it in
    one legal move.  ``t`` is a successor when ``[p, x, t]`` is a shortest
    ``p -> t`` path in that graph and no shortest path makes its first diagonal
    move earlier.
    """
    nb = {(d.dx, d.dy): d for d in Direction if legal_moves(mask) & _bit(d)}
    if incoming is None:
        return dirs_to_mask(nb.values())
    incoming = Direction(incoming)
    p = (-incoming.dx, -incoming.dy)
    if p not in nb:
        return 0
    verts = [(0, 0)] + list(nb)
    edges = _local_edges(mask, verts)
    dist = {p: Cost()}
    heap = [(0.0, 0, p)]
    done = set()
    tick = 1
    while heap:
        _, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w, _ in edges[u]:
            nd = dist[u] + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (float(nd), tick, v))
                tick += 1

    # every shortest p -> v path, summarised as (rank, number of moves)
    inf = 99
    paths = {p: [(inf, 0)]}
    for u in sorted(dist, key=lambda v: float(dist[v])):
        for v, w, diag in edges[u]:
            if v == p or dist[u] + w != dist[v]:
                continue
            for r, n in paths.get(u, ()):
                rank = r if r != inf else (n + 1 if diag else inf)
                paths.setdefault(v, []).append((rank, n + 1))

    out = 0
    for t, d in nb.items():
        if t == p:
            continue
        move = Cost(0, 1) if d.is_diagonal else Cost(1, 0)
        arrive = Cost(0, 1) if incoming.is_diagonal else Cost(1, 0)
        if arrive + move != dist.get(t):
            continue
        own_rank = 1 if incoming.is_diagonal else (2 if d.is_diagonal else inf)
        if all(own_rank <= r for r, _ in paths[t]):
            out |= _bit(d)
    return out


def validate_tables() -> list[tuple]:
    """Compare the lookup tables with the brute-force evaluator; return mismatches."""
    bad = []
    for mask in range(256):
        for incoming in list(Direction) + [None]:
            want = reference_successors(incoming, mask)
            got = int(SUCC_TABLE[_row(incoming), mask])
            if want != got:
                bad.append((incoming, mask, got, want))
    return bad
