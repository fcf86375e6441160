import numpy as np
import pytest

from gridpath.blockscan import ScanKind, naive_scan, scan, scan_limited
from gridpath.grid import CARDINALS, Direction, GridMap

from conftest import grid_from, random_grid

N, NE, E, SE, S, SW, W, NW = Direction


def test_block_example_finds_jump_point(backend):
    # rows 100, 000, 000: the obstacle above-left of x makes x a jump point
    g = grid_from("""
        @..
        ...
        ...
    """)
    r = scan(g, (0, 1), E, backend=backend)
    assert r.kind == ScanKind.JUMP_POINT
    assert r.stop == (1, 1) and r.steps == 1
    assert not r.limit_hit


def test_open_row_runs_to_border(backend):
    g = GridMap(10, 3)
    r = scan(g, (2, 1), E, backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.DEAD_END, (9, 1), 7)
    r = scan(g, (2, 1), W, backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.DEAD_END, (0, 1), 2)


def test_target_on_scan_line(backend):
    g = grid_from("""
        .....@...
        .........
        .........
    """)
    # the jump point at (6, 1) lies beyond the target
    r = scan(g, (0, 1), E, target=(3, 1), backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.TARGET, (3, 1), 3)
    r = scan(g, (0, 1), E, backend=backend)
    assert (r.kind, r.stop) == (ScanKind.JUMP_POINT, (6, 1))


def test_vertical_scans(backend):
    g = grid_from("""
        ...
        ...
        ...
        @..
        ...
    """)
    r = scan(g, (1, 0), S, backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.JUMP_POINT, (1, 4), 4)
    r = scan(g, (1, 4), N, backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.JUMP_POINT, (1, 2), 2)


def test_dead_end_steps_count_legal_moves(backend):
    g = grid_from("""
        .....
        ....@
        .....
    """)
    # front cell (4, 1) blocked; the side rows are open, nothing is forced
    r = scan(g, (0, 1), E, backend=backend)
    assert (r.kind, r.stop, r.steps) == (ScanKind.DEAD_END, (3, 1), 3)


def test_rejects_diagonal_direction():
    with pytest.raises(ValueError):
        scan(GridMap(3, 3), (1, 1), NE)
    with pytest.raises(ValueError):
        scan_limited(GridMap(3, 3), (1, 1), E, limit=-1)


@pytest.mark.parametrize("boundaries", [1, 2, 3])
def test_word_boundary_crossings(backend, boundaries):
    width = 64 * boundaries + 40
    for d, sx, dist in ((E, 3, 64 * boundaries + 5), (W, width - 4, 64 * boundaries + 5)):
        g = GridMap(width, 3)
        jx = sx + dist if d == E else sx - dist
        # obstacle diagonally behind the jump point on the row above
        g.block((jx - 1 if d == E else jx + 1, 0))
        r = scan(g, (sx, 1), d, backend=backend)
        assert r == naive_scan(g, (sx, 1), d)
        assert (r.kind, r.stop, r.steps) == (ScanKind.JUMP_POINT, (jx, 1), dist)
    # the same across columns
    height = 64 * boundaries + 40
    g = GridMap(3, height)
    g.block((0, 64 * boundaries + 7))
    r = scan(g, (1, 2), S, backend=backend)
    assert r == naive_scan(g, (1, 2), S)
    assert r.stop == (1, 64 * boundaries + 8)


def test_scan_matches_naive_on_random_maps(backend):
    rng = np.random.default_rng(3)
    for _ in range(40):
        g = random_grid(rng, lo=8, hi=200, max_density=0.4)
        free = np.argwhere(g.cells)
        for _ in range(100):
            y, x = free[rng.integers(len(free))]
            d = CARDINALS[rng.integers(4)]
            t = None
            if rng.random() < 0.3:
                ty, tx = free[rng.integers(len(free))]
                t = (int(tx), int(ty))
            assert scan(g, (int(x), int(y)), d, t, backend=backend) == naive_scan(g, (int(x), int(y)), d, t)


# ------------------------------------------------------------ limited scans


def test_limit_beyond_natural_stop_is_plain_scan(backend):
    g = grid_from("""
        ....@...
        ........
        ........
    """)
    plain = scan(g, (0, 1), E, backend=backend)
    limited = scan_limited(g, (0, 1), E, limit=6, backend=backend)
    assert limited == plain and not limited.limit_hit


def test_limit_in_open_corridor(backend):
    g = GridMap(20, 3)
    r = scan_limited(g, (2, 1), E, limit=5, backend=backend)
    assert (r.kind, r.stop, r.steps, r.limit_hit) == (ScanKind.DEAD_END, (7, 1), 5, True)
    r = scan_limited(g, (2, 1), E, limit=0, backend=backend)
    assert (r.kind, r.stop, r.steps, r.limit_hit) == (ScanKind.DEAD_END, (2, 1), 0, True)


def test_jump_point_exactly_at_limit_is_reported(backend):
    g = grid_from("""
        ...@......
        ..........
        ..........
    """)
    r = scan_limited(g, (0, 1), E, limit=4, backend=backend)
    assert (r.kind, r.stop, r.limit_hit) == (ScanKind.JUMP_POINT, (4, 1), False)


def test_limit_past_border_or_obstacle_is_genuine_dead_end(backend):
    g = GridMap(6, 3)
    r = scan_limited(g, (0, 1), E, limit=5, backend=backend)
    assert (r.kind, r.steps, r.limit_hit) == (ScanKind.DEAD_END, 5, False)
    r = scan_limited(g, (0, 1), E, limit=50, backend=backend)
    assert (r.kind, r.steps, r.limit_hit) == (ScanKind.DEAD_END, 5, False)


def test_target_at_limit_still_intercepted(backend):
    g = GridMap(12, 3)
    r = scan_limited(g, (0, 1), E, target=(5, 1), limit=5, backend=backend)
    assert (r.kind, r.stop) == (ScanKind.TARGET, (5, 1))


def test_limited_scan_restores_map_and_agrees_with_truncated_naive(backend):
    rng = np.random.default_rng(11)
    for _ in range(30):
        g = random_grid(rng, lo=8, hi=150, max_density=0.4)
        before = g.checksum()
        snapshot = g.copy()
        free = np.argwhere(g.cells)
        for _ in range(60):
            y, x = free[rng.integers(len(free))]
            start = (int(x), int(y))
            d = CARDINALS[rng.integers(4)]
            limit = int(rng.integers(0, 80))
            r = scan_limited(g, start, d, limit=limit, backend=backend)
            ref = naive_scan(g, start, d)
            if ref.steps <= limit:
                assert r == ref
            else:
                assert (r.kind, r.steps, r.limit_hit) == (ScanKind.DEAD_END, limit, True)
            assert g.checksum() == before
        assert g == snapshot
