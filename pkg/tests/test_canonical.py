import itertools

import pytest

from gridpath.canonical import (CORNER_TABLE, JUMP_TABLE, START, SUCC_TABLE, dirs_to_mask,
                                intersect_successors, is_corner_point, is_jump_point,
                                legal_moves, mask_to_dirs, neighborhood_mask,
                                reference_successors, successors, validate_tables)
from gridpath.grid import CARDINALS, Direction, GridMap, can_step

from conftest import grid_from

N, NE, E, SE, S, SW, W, NW = Direction


def _mask_grid(mask):
    """3x3 map whose centre (1, 1) has the given neighbourhood mask."""
    g = GridMap(3, 3)
    for d in Direction:
        if not mask & (1 << d):
            g.block((1 + d.dx, 1 + d.dy))
    return g


def test_tables_match_brute_force_exhaustively():
    assert SUCC_TABLE.shape == (9, 256)
    assert validate_tables() == []


def test_open_neighbourhood_natural_successors():
    g = GridMap(3, 3)
    assert successors(g, (1, 1), E) == {E}
    assert successors(g, (1, 1), N) == {N}
    assert successors(g, (1, 1), NE) == {N, E, NE}
    assert successors(g, (1, 1), SW) == {S, W, SW}
    assert successors(g, (1, 1), START) == set(Direction)


def test_forced_neighbours_beside_an_obstacle():
    # arriving eastwards with the north-west cell blocked: north and north-east
    # become reachable only through the centre
    g = grid_from("""
        @..
        ...
        ...
    """)
    assert successors(g, (1, 1), E) == {N, NE, E}
    assert is_jump_point(g, (1, 1), E)
    assert not is_jump_point(g, (1, 1), W)


def test_open_cell_and_dead_end_are_not_jump_points():
    g = GridMap(3, 3)
    assert not is_jump_point(g, (1, 1), E)
    assert not is_corner_point(g, (1, 1))
    dead = grid_from("""
        ...
        ..@
        ...
    """)
    # forward blocked, nothing forced
    assert successors(dead, (1, 1), E) == set()
    assert not is_jump_point(dead, (1, 1), E)


def test_forced_turn_counts_as_jump_point_with_blocked_front():
    g = grid_from("""
        @..
        ..@
        @@@
    """)
    # north is forced; north-east would cut the blocked east corner
    assert successors(g, (1, 1), E) == {N}
    assert is_jump_point(g, (1, 1), E)


def test_jump_point_predicate_is_non_straight_successor():
    for mask in range(256):
        for d in CARDINALS:
            succ = int(SUCC_TABLE[d, mask])
            assert bool(JUMP_TABLE[d, mask]) == bool(succ & ~(1 << d))
        assert bool(CORNER_TABLE[mask]) == any(JUMP_TABLE[d, mask] for d in CARDINALS)


def test_successors_are_legal_moves():
    for mask in range(256):
        g = _mask_grid(mask)
        legal = {d for d in Direction if can_step(g, (1, 1), d)}
        assert mask_to_dirs(legal_moves(mask)) == legal
        assert successors(g, (1, 1), START) == legal
        for d in Direction:
            assert successors(g, (1, 1), d) <= legal


def test_cardinal_open_neighbourhood_has_single_successor():
    for d in CARDINALS:
        assert int(SUCC_TABLE[d, 0xFF]) == 1 << d


def test_reference_evaluator_spot_checks():
    # diagonal arrival: an obstacle off the diagonal forces nothing
    mask = 0xFF & ~(1 << NW)
    assert mask_to_dirs(reference_successors(NE, mask)) == {N, NE, E}
    # diagonal arrival that would cut a corner is impossible
    mask = 0xFF & ~(1 << W)
    assert reference_successors(NE, mask) == 0
    # southward arrival with the whole east side blocked behind and beside
    mask = 0xFF & ~(1 << NE) & ~(1 << E)
    assert mask_to_dirs(reference_successors(S, mask)) == {S}


def test_mask_helpers_round_trip():
    for dirs in itertools.combinations(Direction, 3):
        assert mask_to_dirs(dirs_to_mask(dirs)) == set(dirs)
    g = GridMap(3, 3)
    g.block((0, 0))
    assert neighborhood_mask(g, (1, 1)) == 0xFF & ~(1 << NW)


def test_corner_point_next_to_obstacle_corner():
    g = grid_from("""
        @..
        ...
        ...
    """)
    assert is_corner_point(g, (1, 1))
    # the far corner sees no obstacle in its neighbourhood
    big = GridMap(5, 5)
    big.block((0, 0))
    assert not is_corner_point(big, (3, 3))


# ------------------------------------------------------------ intersection pruning


def test_intersection_singleton_and_disjoint():
    g = grid_from("""
        @..
        ...
        ...
    """)
    assert intersect_successors(g, (1, 1), [E]) == successors(g, (1, 1), E)
    assert intersect_successors(GridMap(3, 3), (1, 1), [N, E]) == set()
    with pytest.raises(ValueError):
        intersect_successors(g, (1, 1), [])


def test_intersection_is_monotone():
    for mask in range(0, 256, 7):
        g = _mask_grid(mask)
        for a, b in itertools.combinations(Direction, 2):
            assert intersect_successors(g, (1, 1), [a, b]) <= intersect_successors(g, (1, 1), [a])


def test_jump_point_is_defined_for_cardinals_only():
    with pytest.raises(ValueError):
        is_jump_point(GridMap(3, 3), (1, 1), NE)
