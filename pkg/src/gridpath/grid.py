"""Grid world: traversability, dual bitmaps, exact octile costs, map I/O and generators.

Coordinates are ``(x, y)`` with ``x`` the column (east) and ``y`` the row (south),
matching MovingAI ``.scen`` files.  Bitmaps use 1 for blocked cells and carry a
full word of blocked padding on the low side and at least one word on the high
side, so word-sized reads around any in-bounds cell never leave the array.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

WORD_BITS = 64
# offset of logical index 0 inside a padded bit row/column
PAD_BITS = WORD_BITS
SQRT2 = math.sqrt(2.0)

TRAVERSABLE_CHARS = frozenset(".GS")
KNOWN_CHARS = frozenset(".GS@OTW")


class MapFormatError(ValueError):
    """Raised for malformed ``.map`` text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Coord(NamedTuple):
    x: int
    y: int


class Direction(enum.IntEnum):
    """The eight moves, numbered clockwise from north."""

    N = 0
    NE = 1
    E = 2
    SE = 3
    S = 4
    SW = 5
    W = 6
    NW = 7

    @property
    def dx(self) -> int:
        return _DX[self]

    @property
    def dy(self) -> int:
        return _DY[self]

    @property
    def is_diagonal(self) -> bool:
        return bool(self & 1)

    @property
    def components(self) -> tuple["Direction", ...]:
        """The cardinal moves a diagonal is made of; a cardinal is its own component."""
        if self & 1:
            return (Direction((self - 1) % 8), Direction((self + 1) % 8))
        return (self,)

    @property
    def opposite(self) -> "Direction":
        return Direction((self + 4) % 8)


_DX = (0, 1, 1, 1, 0, -1, -1, -1)
_DY = (-1, -1, 0, 1, 1, 1, 0, -1)
CARDINALS = (Direction.N, Direction.E, Direction.S, Direction.W)
DIAGONALS = (Direction.NE, Direction.SE, Direction.SW, Direction.NW)


def _sign_of_sum(a: int, b: int) -> int:
    """Sign of ``a + b*sqrt(2)`` using integer arithmetic only."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2
    lhs, rhs = a * a, 2 * b * b
    if a > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


@dataclass(frozen=True, slots=True)
class Cost:
    """Exact path cost ``cardinals + diagonals * sqrt(2)``.

    Comparisons never go through floating point.  ``INFINITY`` compares greater
    than every finite cost and absorbs addition.
    """

    cardinals: int = 0
    diagonals: int = 0
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite and (self.cardinals < 0 or self.diagonals < 0):
            raise ValueError("cost components must be non-negative")

    def compare(self, other: "Cost") -> int:
        if self.infinite or other.infinite:
            return int(self.infinite) - int(other.infinite)
        return _sign_of_sum(self.cardinals - other.cardinals, self.diagonals - other.diagonals)

    def __lt__(self, other: "Cost") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "Cost") -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: "Cost") -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: "Cost") -> bool:
        return self.compare(other) >= 0

    def __add__(self, other: "Cost") -> "Cost":
        if self.infinite or other.infinite:
            return INFINITY
        return Cost(self.cardinals + other.cardinals, self.diagonals + other.diagonals)

    def __float__(self) -> float:
        return math.inf if self.infinite else self.cardinals + self.diagonals * SQRT2

    def __repr__(self) -> str:
        if self.infinite:
            return "Cost(inf)"
        return f"Cost({self.cardinals}, {self.diagonals})"


INFINITY = Cost(0, 0, infinite=True)
ZERO = Cost(0, 0)
CARDINAL_STEP = Cost(1, 0)
DIAGONAL_STEP = Cost(0, 1)


def octile_distance(a, b) -> Cost:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return Cost(abs(dx - dy), min(dx, dy))


def _words_for(n: int) -> int:
    # low padding word, logical bits, then at least one full word of high padding
    return (PAD_BITS + n) // WORD_BITS + 2


def _pack_rows(blocked: np.ndarray, nwords: int) -> np.ndarray:
    """Pack each row of a padded blocked array into little-endian uint64 words."""
    rows, n = blocked.shape
    bits = np.ones((rows, nwords * WORD_BITS), dtype=np.uint8)
    bits[:, PAD_BITS:PAD_BITS + n] = blocked
    packed = np.packbits(bits, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


class GridMap:
    """An 8-connected uniform-cost grid.

    Internally keeps three synchronized views: a padded traversability array
    (``open``, 1 = traversable, one blocked cell of border on every side), a
    row-major bitmap and a column-major bitmap (1 = blocked).
    """

    def __init__(self, width: int, height: int, traversable=None):
        if width <= 0 or height <= 0:
            raise ValueError("map dimensions must be positive")
        self.width = int(width)
        self.height = int(height)
        if traversable is None:
            cells = np.ones((self.height, self.width), dtype=bool)
        else:
            cells = np.asarray(traversable, dtype=bool)
            if cells.shape != (self.height, self.width):
                raise ValueError(f"expected shape {(self.height, self.width)}, got {cells.shape}")
        self.open = np.zeros((self.height + 2, self.width + 2), dtype=np.uint8)
        self.open[1:-1, 1:-1] = cells
        self._artificial: dict[tuple[int, int], list] = {}
        self._rebuild_bits()

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "GridMap":
        rows = list(rows)
        cells = np.array([[ch in TRAVERSABLE_CHARS for ch in row] for row in rows], dtype=bool)
        return cls(len(rows[0]), len(rows), cells)

    def _rebuild_bits(self) -> None:
        blocked = (1 - self.open).astype(np.uint8)
        # padded rows/cols include the one-cell border; bit index = PAD_BITS + logical index
        self.row_bits = _pack_rows(blocked[:, 1:-1], _words_for(self.width))
        self.col_bits = _pack_rows(np.ascontiguousarray(blocked[1:-1, :].T), _words_for(self.height))

    @property
    def cells(self) -> np.ndarray:
        """Copy of the traversability flags, shape ``(height, width)``."""
        return self.open[1:-1, 1:-1].astype(bool)

    def copy(self) -> "GridMap":
        return GridMap(self.width, self.height, self.cells)

    def in_bounds(self, coord) -> bool:
        x, y = coord
        return 0 <= x < self.width and 0 <= y < self.height

    def is_traversable(self, coord) -> bool:
        x, y = coord
        if not (0 <= x < self.width and 0 <= y < self.height):
            return False
        return bool(self.open[y + 1, x + 1])

    def traversable_count(self) -> int:
        return int(self.open.sum())

    def _write(self, x: int, y: int, blocked: bool) -> None:
        self.open[y + 1, x + 1] = 0 if blocked else 1
        rb = PAD_BITS + x
        cb = PAD_BITS + y
        rmask = np.uint64(1 << (rb % WORD_BITS))
        cmask = np.uint64(1 << (cb % WORD_BITS))
        if blocked:
            self.row_bits[y + 1, rb // WORD_BITS] |= rmask
            self.col_bits[x + 1, cb // WORD_BITS] |= cmask
        else:
            self.row_bits[y + 1, rb // WORD_BITS] &= ~rmask
            self.col_bits[x + 1, cb // WORD_BITS] &= ~cmask

    def _check(self, coord) -> tuple[int, int]:
        x, y = int(coord[0]), int(coord[1])
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise ValueError(f"coordinate {(x, y)} out of bounds for {self.width}x{self.height} map")
        return x, y

    def block(self, coord) -> None:
        """Permanently block a cell."""
        x, y = self._check(coord)
        self._write(x, y, True)

    def unblock(self, coord) -> None:
        x, y = self._check(coord)
        self._write(x, y, False)

    def set_obstacle(self, coord) -> None:
        """Place an artificial obstacle; undone by a matching :meth:`unset_obstacle`.

        Setting an already blocked cell is recorded, so the matching unset leaves
        it blocked.  Nested sets on one cell are counted.
        """
        x, y = self._check(coord)
        entry = self._artificial.get((x, y))
        if entry is None:
            self._artificial[(x, y)] = [not self.open[y + 1, x + 1], 1]
            self._write(x, y, True)
        else:
            entry[1] += 1

    def unset_obstacle(self, coord) -> None:
        x, y = self._check(coord)
        entry = self._artificial.get((x, y))
        if entry is None:
            raise ValueError(f"no artificial obstacle at {(x, y)}")
        entry[1] -= 1
        if entry[1] == 0:
            del self._artificial[(x, y)]
            self._write(x, y, entry[0])

    def row_bit(self, x: int, y: int) -> int:
        """Blocked bit of cell (x, y) in the row-major bitmap; accepts padding coords."""
        b = PAD_BITS + x
        return int(self.row_bits[y + 1, b // WORD_BITS] >> np.uint64(b % WORD_BITS)) & 1

    def col_bit(self, x: int, y: int) -> int:
        b = PAD_BITS + y
        return int(self.col_bits[x + 1, b // WORD_BITS] >> np.uint64(b % WORD_BITS)) & 1

    def checksum(self) -> int:
        return hash((self.open.tobytes(), self.row_bits.tobytes(), self.col_bits.tobytes()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridMap):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.open, other.open)
            and np.array_equal(self.row_bits, other.row_bits)
            and np.array_equal(self.col_bits, other.col_bits)
        )

    def __repr__(self) -> str:
        return f"GridMap({self.width}x{self.height}, traversable={self.traversable_count()})"


def can_step(grid: GridMap, coord, direction: Direction) -> bool:
    """True iff the move is in bounds, lands on a free cell and cuts no corner."""
    x, y = coord
    d = Direction(direction)
    op = grid.open
    nx, ny = x + d.dx, y + d.dy
    if not op[ny + 1, nx + 1]:
        return False
    if d.is_diagonal:
        return bool(op[y + 1, nx + 1] and op[ny + 1, x + 1])
    return True


# ---------------------------------------------------------------- map I/O


def load_map(text: str) -> GridMap:
    """Parse MovingAI ``.map`` text."""
    lines = text.splitlines()
    if len(lines) < 4:
        raise MapFormatError("truncated header", len(lines) + 1)
    header = [ln.strip().split() for ln in lines[:4]]
    if header[0] != ["type", "octile"]:
        raise MapFormatError(f"expected 'type octile', got {lines[0]!r}", 1)
    dims = {}
    for lineno, parts in ((2, header[1]), (3, header[2])):
        if len(parts) != 2 or parts[0] not in ("height", "width") or not parts[1].isdigit():
            raise MapFormatError(f"bad dimension line {lines[lineno - 1]!r}", lineno)
        dims[parts[0]] = int(parts[1])
    if set(dims) != {"height", "width"}:
        raise MapFormatError("header must give both height and width", 3)
    if header[3] != ["map"]:
        raise MapFormatError(f"expected 'map', got {lines[3]!r}", 4)
    height, width = dims["height"], dims["width"]
    body = lines[4:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != height:
        raise MapFormatError(f"expected {height} map rows, found {len(body)}", 5 + min(len(body), height))
    cells = np.zeros((height, width), dtype=bool)
    for y, row in enumerate(body):
        row = row.rstrip("\r")
        if len(row) != width:
            raise MapFormatError(f"expected {width} characters, found {len(row)}", 5 + y)
        for x, ch in enumerate(row):
            if ch not in KNOWN_CHARS:
                raise MapFormatError(f"unknown terrain character {ch!r} at column {x}", 5 + y)
            cells[y, x] = ch in TRAVERSABLE_CHARS
    return GridMap(width, height, cells)


def dump_map(grid: GridMap) -> str:
    out = ["type octile", f"height {grid.height}", f"width {grid.width}", "map"]
    cells = grid.cells
    for row in cells:
        out.append("".join("." if c else "@" for c in row))
    return "\n".join(out) + "\n"


def read_map(path) -> GridMap:
    with open(path) as fh:
        return load_map(fh.read())


def write_map(grid: GridMap, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_map(grid))


# ---------------------------------------------------------------- generators


def _block_random(cells: np.ndarray, r: float, rng: np.random.Generator, protected=()) -> int:
    free = np.flatnonzero(cells.ravel())
    count = math.floor(r * free.size)
    candidates = free
    if protected:
        w = cells.shape[1]
        keep = np.array([y * w + x for x, y in protected], dtype=np.int64)
        candidates = np.setdiff1d(free, keep, assume_unique=False)
    count = min(count, candidates.size)
    if count:
        chosen = rng.choice(candidates, size=count, replace=False)
        cells.ravel()[chosen] = False
    return count


def gen_synthetic(s: int, b: float, r: float, seed: int) -> GridMap:
    """Open ``s x s`` map with a centered anti-diagonal wall and random obstacles.

    The wall is one cell thick, runs along ``x + y == s - 1`` and covers
    ``round(b * s)`` cells centred on the map; with corner cutting forbidden it
    cannot be crossed.  Then ``floor(r * free)`` of the remaining free cells are
    blocked uniformly at random.
    """
    if s < 8:
        raise ValueError("s must be at least 8")
    if not 0.0 <= b <= 1.0:
        raise ValueError("b must lie in [0, 1]")
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    cells = np.ones((s, s), dtype=bool)
    length = round(b * s)
    first = (s - length) // 2
    for i in range(first, first + length):
        cells[s - 1 - i, i] = False
    rng = np.random.default_rng(seed)
    _block_random(cells, r, rng)
    return GridMap(s, s, cells)


def gen_clustered_queries(grid: GridMap, n: int, seed: int) -> list[tuple[Coord, Coord]]:
    """Starts in the top-left quadrant, targets in the bottom-right one."""
    qw, qh = max(1, grid.width // 4), max(1, grid.height // 4)
    cells = grid.cells
    tl = np.argwhere(cells[:qh, :qw])
    br = np.argwhere(cells[grid.height - qh:, grid.width - qw:])
    if len(tl) < n or len(br) < n:
        raise ValueError(f"need {n} traversable cells per corner, have {len(tl)} and {len(br)}")
    rng = np.random.default_rng(seed)
    si = rng.integers(0, len(tl), size=n)
    ti = rng.integers(0, len(br), size=n)
    out = []
    for a, c in zip(si, ti):
        sy, sx = tl[a]
        ty, tx = br[c]
        out.append((Coord(int(sx), int(sy)), Coord(int(tx) + grid.width - qw, int(ty) + grid.height - qh)))
    return out


def gen_maze(cols: int, rows: int, seed: int) -> GridMap:
    """Perfect maze with one-cell corridors (recursive backtracker).

    The result is ``(2*cols+1) x (2*rows+1)``; its free cells form a tree under
    8-connectivity because every diagonal move would cut a wall corner.
    """
    w, h = 2 * cols + 1, 2 * rows + 1
    cells = np.zeros((h, w), dtype=bool)
    rng = np.random.default_rng(seed)
    seen = np.zeros((rows, cols), dtype=bool)
    stack = [(0, 0)]
    seen[0, 0] = True
    cells[1, 1] = True
    while stack:
        cx, cy = stack[-1]
        nbrs = [(cx + dx, cy + dy) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 0 <= cx + dx < cols and 0 <= cy + dy < rows and not seen[cy + dy, cx + dx]]
        if not nbrs:
            stack.pop()
            continue
        nx, ny = nbrs[rng.integers(len(nbrs))]
        seen[ny, nx] = True
        cells[2 * ny + 1, 2 * nx + 1] = True
        cells[cy + ny + 1, cx + nx + 1] = True
        stack.append((nx, ny))
    return GridMap(w, h, cells)


def block_random(grid: GridMap, r: float, seed: int, protected=()) -> GridMap:
    """Copy of ``grid`` with ``floor(r * free)`` random free cells blocked.

    Cells listed in ``protected`` are never chosen.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    cells = grid.cells
    _block_random(cells, r, np.random.default_rng(seed), protected)
    return GridMap(grid.width, grid.height, cells)
