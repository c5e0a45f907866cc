"""Wall-clock and step budgets shared by the engines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


class Exhausted(Exception):
    """A resource budget ran out before the computation finished."""


@dataclass
class Budget:
    seconds: float | None = None
    max_pairs: int | None = None
    _start: float = field(default_factory=time.monotonic, repr=False)

    def check(self, steps_done: int = 0) -> None:
        if self.seconds is not None and time.monotonic() - self._start > self.seconds:
            raise Exhausted(f"time budget of {self.seconds}s exceeded")
        if self.max_pairs is not None and steps_done > self.max_pairs:
            raise Exhausted(f"step budget of {self.max_pairs} exceeded")

    def remaining(self) -> float | None:
        if self.seconds is None:
            return None
        return self.seconds - (time.monotonic() - self._start)

    def share(self, fraction: float) -> "Budget":
        """A sub-budget holding ``fraction`` of the remaining time and the same step cap."""
        left = self.remaining()
        return Budget(None if left is None else max(left, 0.0) * fraction, self.max_pairs)
