"""First scale at which a set of sparse balls has a common point."""

from __future__ import annotations

from collections.abc import Collection
from itertools import combinations
import math

from .geometry import Metric, PointSet
from .lp import Constraint, solve_M
from .sparseballs import RadiusVariant, SparseBallSystem


def first_intersection_scale(
    sys: SparseBallSystem,
    ps: PointSet,
    A: Collection[int],
    seed: int = 0,
) -> float | None:
    """Smallest ``r`` where the quadratic sparse balls of ``A`` meet in ``R^d``.

    Each point contributes ``||a - z||^2 <= r^2`` and, once it can slow down,
    ``||a - z||^2 <= K r^2 + (1 - K) slow(a)^2``.  ``None`` means the balls
    only meet after one of them has been deleted.
    """

    if ps.coords is None or ps.metric is not Metric.L2:
        raise ValueError("the minimum-reach solve needs Euclidean l2 coordinates")
    if sys.variant is not RadiusVariant.QUADRATIC:
        raise ValueError("the minimum-reach solve needs the quadratic radius")
    members = sorted(A)
    if not members:
        raise ValueError("need at least one point")

    k = sys.k_eps
    constraints: list[Constraint] = []
    for a in members:
        point = ps.coords[a]
        constraints.append(Constraint(point, 1.0, 0.0))
        slow = float(sys.slow[a])
        if math.isfinite(slow):
            constraints.append(Constraint(point, k, (1.0 - k) * slow * slow))
    if len(members) == 1:
        return 0.0

    solution = solve_M(constraints, seed)
    r_opt = math.sqrt(max(solution.value, 0.0))
    end = min(float(sys.dis[a]) for a in members)
    return r_opt if r_opt <= end else None


def pairwise_first_intersection(
    sys: SparseBallSystem,
    ps: PointSet,
    x: int,
    y: int,
) -> float | None:
    """Smallest ``r`` with ``radius(x, r) + radius(y, r) >= dist(x, y)``.

    The radius sum is piecewise linear or piecewise square-root with cuts at
    the two slowing times, so each cell is solved in closed form.
    """

    if x == y:
        return 0.0
    distance = ps.dist(x, y)
    end = min(float(sys.dis[x]), float(sys.dis[y]))
    cuts = sorted({0.0, end, *(float(sys.slow[p]) for p in (x, y) if sys.slow[p] < end)})
    for low, high in zip(cuts, cuts[1:]):
        if _radius_sum(sys, x, y, high) < distance:
            continue
        middle = 0.5 * (low + high)
        slowed = [p for p in (x, y) if middle > sys.slow[p]]
        r = _solve_cell(sys, distance, slowed)
        return min(max(r, low), high)
    return None


def _radius_sum(sys: SparseBallSystem, x: int, y: int, r: float) -> float:
    total = 0.0
    for p in (x, y):
        rho = sys.radius(p, r)
        if rho is None:
            return -math.inf
        total += rho
    return total


def _solve_cell(sys: SparseBallSystem, distance: float, slowed: list[int]) -> float:
    if not slowed:
        return 0.5 * distance
    eps = sys.eps
    if sys.variant is RadiusVariant.LINEAR_U:
        slope = 1.0 / (3.0 * (1.0 + eps))
        offset = (2.0 + 3.0 * eps) / (3.0 * (1.0 + eps))
        rate = (2 - len(slowed)) + slope * len(slowed)
        constant = offset * sum(float(sys.slow[p]) for p in slowed)
        return (distance - constant) / rate

    k = sys.k_eps
    weights = [(1.0 - k) * float(sys.slow[p]) ** 2 for p in slowed]
    if len(slowed) == 1:
        # r + sqrt(K r^2 + c) = D; the other root exceeds D.
        (c,) = weights
        return (distance - math.sqrt(k * distance * distance + (1.0 - k) * c)) / (1.0 - k)
    c1, c2 = weights
    spread = distance * distance - c1 - c2
    u = (spread * spread - 4.0 * c1 * c2) / (4.0 * distance * distance)
    return math.sqrt(max(u, 0.0) / k)


def max_pairwise_intersection(
    sys: SparseBallSystem,
    ps: PointSet,
    A: Collection[int],
) -> float | None:
    """First scale where all balls of ``A`` pairwise meet, inside their window.

    Under the sup norm and for the Rips reading of a finite metric, pairwise
    intersection is the intersection criterion.
    """

    members = sorted(A)
    if not members:
        raise ValueError("need at least one point")
    r_star = 0.0
    for x, y in combinations(members, 2):
        r = pairwise_first_intersection(sys, ps, x, y)
        if r is None:
            return None
        r_star = max(r_star, r)
    end = min(float(sys.dis[a]) for a in members)
    return r_star if r_star <= end else None


__all__ = [
    "first_intersection_scale",
    "max_pairwise_intersection",
    "pairwise_first_intersection",
]
