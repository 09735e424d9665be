"""Search and size budgets shared by all constructing operations."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import SearchExhausted, SizeCapExceeded


@dataclass(frozen=True)
class Budget:
    """Caps for constructions and searches.

    Exceeding ``max_elements`` is always an explicit error, never silent
    truncation.  ``timeout_ms`` bounds backtracking searches; hitting it
    surfaces as :class:`SearchExhausted`.
    """

    max_elements: int = 4096
    max_partition_size: int = 7
    timeout_ms: int | None = None
    seed: int = 0
    started_at: float = field(default_factory=time.monotonic)

    def check_elements(self, size, what="lattice"):
        if size > self.max_elements:
            raise SizeCapExceeded(
                f"{what} would have {size} elements, cap is {self.max_elements}",
                size=size,
                cap=self.max_elements,
            )

    def check_time(self, what="search"):
        if self.timeout_ms is None:
            return
        elapsed_ms = (time.monotonic() - self.started_at) * 1000.0
        if elapsed_ms > self.timeout_ms:
            raise SearchExhausted(f"{what} timed out after {self.timeout_ms} ms")


DEFAULT_BUDGET = Budget()
