import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridpath.grid import (INFINITY, ZERO, Coord, Cost, Direction, GridMap, MapFormatError,
                           block_random, can_step, dump_map, gen_clustered_queries, gen_maze,
                           gen_synthetic, load_map, octile_distance, read_map, write_map)


def _map_text(rows):
    return "type octile\nheight {}\nwidth {}\nmap\n{}\n".format(len(rows), len(rows[0]), "\n".join(rows))


def _check_bitmaps(grid):
    """row_bits, col_bits and the padded cell array must tell the same story."""
    op = grid.open
    for y in range(-1, grid.height + 1):
        for x in range(-1, grid.width + 1):
            blocked = 1 - int(op[y + 1, x + 1])
            assert grid.row_bit(x, y) == blocked, (x, y)
            assert grid.col_bit(x, y) == blocked, (x, y)
            if not grid.in_bounds((x, y)):
                assert blocked == 1


# ------------------------------------------------------------ Cost


def test_cost_order_basic():
    assert Cost(1, 0) < Cost(0, 1)
    assert Cost(2, 0) > Cost(0, 1)
    assert Cost(3, 0) < Cost(0, 3)
    assert Cost(7, 0) < Cost(0, 5) < Cost(8, 0)
    assert Cost(5, 2) == Cost(5, 2)
    assert ZERO < Cost(0, 1) < INFINITY
    assert not INFINITY < INFINITY


def test_cost_infinity_absorbs_addition():
    assert Cost(3, 4) + INFINITY == INFINITY
    assert INFINITY + ZERO == INFINITY
    assert Cost(1, 2) + Cost(3, 4) == Cost(4, 6)
    assert float(INFINITY) == math.inf


def test_cost_rejects_negative_components():
    with pytest.raises(ValueError):
        Cost(-1, 0)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_cost_order_agrees_with_floats_when_far_apart(a, b, c, d):
    x, y = Cost(a, b), Cost(c, d)
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9 * max(1.0, abs(fx)):
        assert (x < y) == (fx < fy)
        assert (x > y) == (fx > fy)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=3, max_size=3))
def test_cost_order_is_total_and_transitive(triple):
    a, b, c = (Cost(*t) for t in triple)
    assert sum([a < b, a == b, a > b]) == 1
    if a <= b and b <= c:
        assert a <= c


def test_cost_exact_tie_breaking_near_sqrt2():
    # 29 sqrt2 = 41.012..., 70 sqrt2 = 98.994..., 408 sqrt2 = 576.999...
    assert Cost(41, 0) < Cost(0, 29)
    assert Cost(0, 70) < Cost(99, 0)
    assert Cost(0, 408) < Cost(577, 0)
    assert Cost(2, 408) > Cost(578, 0)


# ------------------------------------------------------------ octile distance


def test_octile_examples():
    assert octile_distance((0, 0), (5, 5)) == Cost(0, 5)
    assert octile_distance((0, 0), (7, 3)) == Cost(4, 3)
    assert octile_distance((4, 9), (4, 9)) == ZERO


@settings(max_examples=300, deadline=None)
@given(*(st.tuples(st.integers(-50, 50), st.integers(-50, 50)) for _ in range(3)))
def test_octile_is_a_metric(a, b, c):
    assert octile_distance(a, b) == octile_distance(b, a)
    assert (octile_distance(a, b) == ZERO) == (a == b)
    assert octile_distance(a, c) <= octile_distance(a, b) + octile_distance(b, c)


# ------------------------------------------------------------ directions and moves


def test_direction_geometry():
    assert [(d.dx, d.dy) for d in Direction] == [(0, -1), (1, -1), (1, 0), (1, 1),
                                                  (0, 1), (-1, 1), (-1, 0), (-1, -1)]
    assert Direction.NE.components == (Direction.N, Direction.E)
    assert Direction.SW.opposite == Direction.NE
    assert Direction.E.is_diagonal is False and Direction.SE.is_diagonal is True


def test_can_step_no_corner_cutting():
    # cell north of the mover blocked: moving NE from the south-west is illegal
    g = GridMap.from_strings(["@.", ".."])
    assert g.is_traversable((1, 0))
    assert not can_step(g, (0, 1), Direction.NE)
    assert can_step(g, (0, 1), Direction.E)
    assert can_step(g, (1, 1), Direction.N)


def test_can_step_open_map_and_blocked_target():
    g = GridMap(3, 3)
    for d in Direction:
        assert can_step(g, (1, 1), d)
    g.block((1, 0))
    assert not can_step(g, (1, 1), Direction.N)
    assert not can_step(g, (1, 1), Direction.NE)
    assert not can_step(g, (1, 1), Direction.NW)
    assert not can_step(g, (0, 0), Direction.W)


# ------------------------------------------------------------ map I/O


def test_load_map_two_by_two():
    g = load_map(_map_text([".@", "@."]))
    assert g.width == 2 and g.height == 2
    assert g.cells.tolist() == [[True, False], [False, True]]
    _check_bitmaps(g)


def test_load_map_open_eight_by_eight():
    g = load_map(_map_text(["." * 8] * 8))
    assert g.traversable_count() == 64
    _check_bitmaps(g)


def test_load_map_terrain_classes():
    g = load_map(_map_text(["GS.T", "@OW."]))
    assert g.cells.tolist() == [[True, True, True, False], [False, False, False, True]]


@pytest.mark.parametrize("text,line", [
    ("type octile\nheight 2\nwidth 2\n", 4),
    ("type hex\nheight 1\nwidth 1\nmap\n.\n", 1),
    ("type octile\nheight x\nwidth 1\nmap\n.\n", 2),
    ("type octile\nheight 1\nwidth 1\nmop\n.\n", 4),
    ("type octile\nheight 2\nwidth 2\nmap\n..\n", 6),
    ("type octile\nheight 2\nwidth 2\nmap\n..\n.\n", 6),
    ("type octile\nheight 1\nwidth 2\nmap\n.?\n", 5),
])
def test_load_map_errors_name_the_line(text, line):
    with pytest.raises(MapFormatError) as exc:
        load_map(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_map_round_trip(tmp_path):
    g = gen_synthetic(32, 0.5, 0.1, 3)
    assert load_map(dump_map(g)) == g
    path = tmp_path / "m.map"
    write_map(g, path)
    assert read_map(path) == g


# ------------------------------------------------------------ obstacles


def test_set_obstacle_updates_both_bitmaps():
    g = GridMap(8, 8)
    g.set_obstacle((3, 3))
    assert g.row_bit(3, 3) == 1 and g.col_bit(3, 3) == 1
    assert not g.is_traversable((3, 3))
    g.unset_obstacle((3, 3))
    assert g == GridMap(8, 8)


def test_set_obstacle_on_blocked_cell_is_restored_blocked():
    g = GridMap.from_strings(["..", ".@"])
    before = g.copy()
    g.set_obstacle((1, 1))
    g.unset_obstacle((1, 1))
    assert g == before


def test_obstacle_errors():
    g = GridMap(4, 4)
    with pytest.raises(ValueError):
        g.set_obstacle((4, 0))
    with pytest.raises(ValueError):
        g.unset_obstacle((1, 1))


def test_random_mutations_against_shadow_grid():
    rng = np.random.default_rng(11)
    g = GridMap(70, 67, rng.random((67, 70)) > 0.3)
    shadow = g.cells.copy()
    for _ in range(3000):
        x, y = int(rng.integers(70)), int(rng.integers(67))
        op = rng.integers(4)
        if op == 0:
            g.block((x, y))
            shadow[y, x] = False
        elif op == 1:
            g.unblock((x, y))
            shadow[y, x] = True
        elif op == 2:
            g.set_obstacle((x, y))
            assert not g.is_traversable((x, y))
            g.unset_obstacle((x, y))
            assert g.is_traversable((x, y)) == shadow[y, x]
        else:
            snap = g.copy()
            g.set_obstacle((x, y))
            g.set_obstacle((x, y))
            g.unset_obstacle((x, y))
            assert not g.is_traversable((x, y))
            g.unset_obstacle((x, y))
            assert g == snap
        assert g.cells[y, x] == shadow[y, x]
    assert np.array_equal(g.cells, shadow)
    _check_bitmaps(g)


@pytest.mark.parametrize("w,h", [(1, 1), (63, 2), (64, 3), (65, 65), (130, 7)])
def test_bitmaps_across_word_sizes(w, h):
    rng = np.random.default_rng(w * 1000 + h)
    _check_bitmaps(GridMap(w, h, rng.random((h, w)) > 0.4))


# ------------------------------------------------------------ generators


def test_gen_synthetic_open():
    assert gen_synthetic(8, 0, 0, 5) == GridMap(8, 8)


def test_gen_synthetic_wall_geometry():
    g = gen_synthetic(16, 0.75, 0, 0)
    blocked = {(x, y) for x, y in itertools.product(range(16), range(16)) if not g.is_traversable((x, y))}
    assert len(blocked) == 12
    assert all(x + y == 15 for x, y in blocked)
    xs = sorted(x for x, _ in blocked)
    assert xs == list(range(2, 14))


def test_gen_synthetic_obstacle_count():
    # 384 wall cells, then floor(0.001 * (512^2 - 384)) = 261 random obstacles
    g = gen_synthetic(512, 0.75, 0.001, 42)
    assert 512 * 512 - g.traversable_count() == 384 + 261


def test_gen_synthetic_deterministic_and_validated():
    assert gen_synthetic(64, 0.5, 0.1, 9) == gen_synthetic(64, 0.5, 0.1, 9)
    assert gen_synthetic(64, 0.5, 0.1, 9) != gen_synthetic(64, 0.5, 0.1, 10)
    for args in [(4, 0, 0, 0), (16, 1.5, 0, 0), (16, 0, -0.1, 0)]:
        with pytest.raises(ValueError):
            gen_synthetic(*args)


def test_gen_clustered_queries():
    g = gen_synthetic(64, 0.75, 0.1, 1)
    qs = gen_clustered_queries(g, 100, 1)
    assert len(qs) == 100
    assert qs == gen_clustered_queries(g, 100, 1)
    for s, t in qs:
        assert s.x < 16 and s.y < 16 and t.x >= 48 and t.y >= 48
        assert g.is_traversable(s) and g.is_traversable(t)
    one = gen_clustered_queries(GridMap(8, 8), 1, 0)
    assert len(one) == 1 and all(GridMap(8, 8).is_traversable(c) for c in one[0])
    with pytest.raises(ValueError):
        gen_clustered_queries(GridMap(8, 8), 5, 0)


def test_gen_maze_is_a_tree():
    g = gen_maze(12, 9, 4)
    assert (g.width, g.height) == (25, 19)
    nodes = {(int(x), int(y)) for y, x in np.argwhere(g.cells)}
    edges = set()
    for x, y in nodes:
        for d in Direction:
            if can_step(g, (x, y), d):
                edges.add(frozenset({(x, y), (x + d.dx, y + d.dy)}))
    assert all(not Direction(d).is_diagonal or not can_step(g, c, d)
               for c in nodes for d in Direction if Direction(d).is_diagonal)
    assert len(edges) == len(nodes) - 1
    # connected: flood fill reaches everything
    start = next(iter(nodes))
    seen, todo = {start}, [start]
    while todo:
        x, y = todo.pop()
        for d in Direction:
            n = (x + d.dx, y + d.dy)
            if can_step(g, (x, y), d) and n not in seen:
                seen.add(n)
                todo.append(n)
    assert seen == nodes


def test_block_random_protects_cells():
    g = GridMap(32, 32)
    protected = [(0, 0), (31, 31), (5, 7)]
    out = block_random(g, 0.5, 3, protected)
    assert 32 * 32 - out.traversable_count() == 512
    assert all(out.is_traversable(c) for c in protected)
    assert g == GridMap(32, 32)


def test_coord_is_a_tuple():
    c = Coord(3, 4)
    assert c == (3, 4) and c.x == 3 and c.y == 4
