"""Per-query counters collected by the engines and the benchmark harness."""
from __future__ import annotations

from dataclasses import dataclass, field

from .grid import INFINITY, Cost


@dataclass
class QueryMetrics:
    expansions: int = 0
    insertions: int = 0
    subopt_expansions: int = 0
    propagated_subopt: int = 0
    scan_steps: int = 0
    time_ns: int = 0
    length: Cost = field(default=INFINITY)
    found: bool = False
    pruned: int = 0
    labels: int = 0

    @property
    def hp_opt(self) -> int:
        """Heap operations: expansions plus insertions."""
        return self.expansions + self.insertions

    def check(self) -> None:
        if not 0 <= self.propagated_subopt <= self.subopt_expansions <= self.expansions:
            raise AssertionError(f"inconsistent suboptimality counts: {self}")
