"""Subsets of points whose sparse balls share a point at some scale."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

from ..geometry import Metric, PointSet
from ..greedy import PersistentNet
from ..intersection import first_intersection_scale, max_pairwise_intersection
from ..sparseballs import RadiusVariant, SparseBallSystem, weight_staircases
from ..staircase import Breakpoint, WeightStaircase, grades
from .friends import all_friends


logger = logging.getLogger(__name__)

DEFAULT_MAX_FRIENDS = 30

IntersectionScale = Callable[[Sequence[int]], float | None]


class FriendsCapExceeded(RuntimeError):
    """A point has too many friends to enumerate their subsets."""

    def __init__(self, point: int, count: int, cap: int) -> None:
        self.point = point
        self.count = count
        self.cap = cap
        super().__init__(
            f"point {point} has {count} friends, above the cap of {cap}; "
            f"its 2^{count} candidate subsets will not be enumerated; "
            "raise the cap or use a larger epsilon"
        )


@dataclass(frozen=True, slots=True)
class PosetElement:
    """A point subset with its intersection window and weight staircase.

    The staircase starts at ``r_star`` and its last value holds for every
    larger scale, including those past ``r_end``.
    """

    id: int
    vertices: tuple[int, ...]
    r_star: float
    r_end: float
    staircase: WeightStaircase

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def grades(self) -> tuple[Breakpoint, ...]:
        return grades(self.staircase)

    def value_at(self, r: float) -> int:
        return 0 if r < self.r_star else self.staircase.value_at(r)


def element_staircase(
    r_star: float,
    r_end: float,
    members: Sequence[WeightStaircase],
) -> WeightStaircase:
    """Summed covering weight of ``members`` on ``[r_star, r_end]``.

    Weight changes at exactly ``r_end`` belong to balls that no longer meet,
    so the window keeps only changes strictly before it.
    """

    if r_star < r_end:
        breakpoints: list[Breakpoint] = [(r_star, sum(s.value_at(r_star) for s in members))]
        inner = sorted({scale for s in members for scale in s.breakpoints_between(r_star, r_end)})
        for scale in inner:
            value = sum(s.value_at(scale) for s in members)
            if value > breakpoints[-1][1]:
                breakpoints.append((scale, value))
    else:
        breakpoints = [(r_star, sum(s.value_before(r_end) for s in members))]
    return WeightStaircase.from_breakpoints(breakpoints)


def intersection_rule(
    sys: SparseBallSystem, ps: PointSet, seed: int = 0
) -> IntersectionScale:
    """The first-intersection test that is exact for this metric and radius.

    Euclidean balls need the minimum-reach solve; sup-norm boxes and the Rips
    reading of a metric only need pairwise tests.
    """

    if ps.metric is Metric.L2:
        if sys.variant is not RadiusVariant.QUADRATIC:
            raise ValueError(
                "l2 input with the linearU radius has no exact intersection test; "
                "use the quadratic radius"
            )

        def solve(members: Sequence[int]) -> float | None:
            return first_intersection_scale(sys, ps, members, seed + members[0])

        return solve

    def pairwise(members: Sequence[int]) -> float | None:
        return max_pairwise_intersection(sys, ps, members)

    return pairwise


def _subsets_from(
    x: int,
    candidates: tuple[int, ...],
    scale_of: IntersectionScale,
    dis: Sequence[float],
) -> list[tuple[tuple[int, ...], float, float]]:
    found: list[tuple[tuple[int, ...], float, float]] = []

    def extend(members: list[int], r_end: float, start: int) -> None:
        for position in range(start, len(candidates)):
            friend = candidates[position]
            grown = [*members, friend]
            end = min(r_end, dis[friend])
            r_star = scale_of(sorted(grown))
            if r_star is None or r_star > end:
                continue
            found.append((tuple(sorted(grown)), r_star, end))
            extend(grown, end, position + 1)

    own_end = dis[x]
    found.append(((x,), 0.0, own_end))
    extend([x], own_end, 0)
    return found


def build_elements(
    net: PersistentNet,
    sys: SparseBallSystem,
    ps: PointSet,
    seed: int = 0,
    *,
    max_friends: int = DEFAULT_MAX_FRIENDS,
    threads: int = 1,
    friend_sets: Sequence[tuple[int, ...]] | None = None,
) -> list[PosetElement]:
    """Every element, in canonical order (by size, then vertex tuple).

    An element whose latest-inserted point is ``x`` only contains friends of ``x``,
    and a set whose balls never meet has no superset whose balls do, so the
    subsets of each friend list are explored depth first and pruned at the
    first failure.
    """

    if friend_sets is None:
        friend_sets = all_friends(net, sys, ps)
    for x in net.order:
        if len(friend_sets[x]) > max_friends:
            raise FriendsCapExceeded(x, len(friend_sets[x]), max_friends)

    scale_of = intersection_rule(sys, ps, seed)
    dis = [float(value) for value in sys.dis]
    staircases = weight_staircases(sys, net)

    def for_point(x: int) -> list[tuple[tuple[int, ...], float, float]]:
        return _subsets_from(x, friend_sets[x], scale_of, dis)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="sparsemc-elements") as pool:
            per_point = list(pool.map(for_point, net.order))
    else:
        per_point = [for_point(x) for x in net.order]

    windows = sorted(
        (window for found in per_point for window in found),
        key=lambda window: (len(window[0]), window[0]),
    )
    elements = [
        PosetElement(
            id=index,
            vertices=vertices,
            r_star=r_star,
            r_end=r_end,
            staircase=element_staircase(r_star, r_end, [staircases[v] for v in vertices]),
        )
        for index, (vertices, r_star, r_end) in enumerate(windows)
    ]
    logger.info(
        "built %d elements from %d points (largest friend list %d)",
        len(elements),
        net.n,
        max((len(found) for found in friend_sets), default=0),
    )
    return elements


__all__ = [
    "DEFAULT_MAX_FRIENDS",
    "FriendsCapExceeded",
    "PosetElement",
    "build_elements",
    "element_staircase",
    "intersection_rule",
]
