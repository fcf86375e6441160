"""Optimal 8-connected grid pathfinding: A*, jump point search and its
constrained variant over block-scanned bitmaps, plus a benchmark harness."""
from ._backend import BACKEND
from .blockscan import ScanKind, ScanResult, naive_scan, scan, scan_limited
from .canonical import (CORNER_TABLE, SUCC_TABLE, intersect_successors, is_corner_point,
                        is_jump_point, successors, validate_tables)
from .grid import (INFINITY, ZERO, Coord, Cost, Direction, GridMap, MapFormatError,
                   gen_clustered_queries, gen_maze, gen_synthetic, load_map, octile_distance,
                   read_map, write_map)
from .metrics import QueryMetrics
from .search import (ASTAR, CJPS, JPS, PathResult, SearchEngine, SearchOptions, astar,
                     cjps, compute_L, dijkstra_table, estimate_gbar, jps)

__version__ = "0.1.0"
