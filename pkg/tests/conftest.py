import sys

import numpy as np
import pytest

from gridpath import _backend
from gridpath.grid import GridMap


@pytest.fixture(params=_backend.available())
def backend(request):
    """Every kernel backend that is importable in this environment."""
    return request.param


def random_grid(rng, lo=16, hi=128, max_density=0.35):
    w, h = (int(v) for v in rng.integers(lo, hi + 1, size=2))
    density = float(rng.uniform(0.0, max_density))
    return GridMap(w, h, rng.random((h, w)) >= density)


def random_free_pair(grid, rng):
    free = np.argwhere(grid.cells)
    (sy, sx), (ty, tx) = free[rng.integers(len(free), size=2)]
    return (int(sx), int(sy)), (int(tx), int(ty))


def grid_from(text):
    """Build a map from a block of '.'/'@' rows (leading/trailing blank lines ignored)."""
    rows = [ln.strip() for ln in text.strip().splitlines()]
    return GridMap.from_strings(rows)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
