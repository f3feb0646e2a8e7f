"""Right-continuous integer step functions of the scale parameter."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
import math


Breakpoint = tuple[float, int]


@dataclass(frozen=True, slots=True)
class WeightStaircase:
    """Non-decreasing step function given by its breakpoints.

    The value at ``r`` is the value of the last breakpoint at or below ``r``
    and zero before the first one.
    """

    scales: tuple[float, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.scales) != len(self.values):
            raise ValueError("scales and values must have the same length")
        for earlier, later in zip(self.scales, self.scales[1:]):
            if not earlier < later:
                raise ValueError(f"breakpoint scales must increase strictly, got {self.scales}")
        for earlier, later in zip(self.values, self.values[1:]):
            if later < earlier:
                raise ValueError(f"staircase values must not decrease, got {self.values}")
        if any(math.isnan(scale) for scale in self.scales):
            raise ValueError("breakpoint scales must not be NaN")

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable[Breakpoint]) -> WeightStaircase:
        pairs = list(breakpoints)
        return cls(
            scales=tuple(float(scale) for scale, _ in pairs),
            values=tuple(int(value) for _, value in pairs),
        )

    @property
    def breakpoints(self) -> tuple[Breakpoint, ...]:
        return tuple(zip(self.scales, self.values))

    @property
    def final_value(self) -> int:
        return self.values[-1] if self.values else 0

    def value_at(self, r: float) -> int:
        position = bisect_right(self.scales, r)
        return self.values[position - 1] if position else 0

    def value_before(self, r: float) -> int:
        """Left limit of the staircase at ``r``."""

        position = bisect_left(self.scales, r)
        return self.values[position - 1] if position else 0

    def breakpoints_between(self, low: float, high: float) -> tuple[float, ...]:
        """Breakpoint scales strictly inside ``(low, high)``."""

        start = bisect_right(self.scales, low)
        stop = bisect_left(self.scales, high)
        return self.scales[start:stop]


def from_jumps(jumps: Iterable[Breakpoint], *, base: int = 1, start: float = 0.0) -> WeightStaircase:
    """Accumulate ``(scale, increment)`` jumps on top of ``base`` at ``start``."""

    totals: dict[float, int] = {}
    for scale, increment in jumps:
        totals[scale] = totals.get(scale, 0) + increment
    breakpoints: list[Breakpoint] = [(start, base + totals.pop(start, 0))]
    running = breakpoints[0][1]
    for scale in sorted(totals):
        if scale < start:
            raise ValueError(f"jump at {scale} precedes the start {start}")
        running += totals[scale]
        breakpoints.append((scale, running))
    return WeightStaircase.from_breakpoints(breakpoints)


def pointwise_min(staircases: Sequence[WeightStaircase], start: float) -> WeightStaircase:
    """Minimum of several staircases, restricted to scales from ``start`` on."""

    if not staircases:
        raise ValueError("need at least one staircase")
    scales = {start}
    for staircase in staircases:
        scales.update(scale for scale in staircase.scales if scale > start)
    breakpoints: list[Breakpoint] = []
    for scale in sorted(scales):
        value = min(staircase.value_at(scale) for staircase in staircases)
        if not breakpoints or value > breakpoints[-1][1]:
            breakpoints.append((scale, value))
    return WeightStaircase.from_breakpoints(breakpoints)


def grades(staircase: WeightStaircase) -> tuple[Breakpoint, ...]:
    """Minimal ``(r, k)`` pairs of the region ``{(r, k) : k <= staircase(r)}``.

    These are the breakpoints where the value strictly increases; they form
    an antichain with both coordinates increasing.
    """

    corners: list[Breakpoint] = []
    for scale, value in staircase.breakpoints:
        if value > 0 and (not corners or value > corners[-1][1]):
            corners.append((scale, value))
    return tuple(corners)


def grades_contain(corners: Sequence[Breakpoint], r: float, k: int) -> bool:
    """Whether ``(r, k)`` lies in the up-set generated by ``corners``."""

    return any(scale <= r and value >= k for scale, value in corners)


__all__ = [
    "Breakpoint",
    "WeightStaircase",
    "from_jumps",
    "grades",
    "grades_contain",
    "pointwise_min",
]
