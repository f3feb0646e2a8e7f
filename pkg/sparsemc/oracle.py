"""Brute-force references for small inputs and the interleaving verifier.

Nothing here uses the minimum-reach solver or the pruned element search:
the references enumerate every subset, find first-intersection scales by
bisection on a direct emptiness test, and read covering weights off the
covering map at sampled scales.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations
import logging
import math
from typing import Any

import numpy as np

from .bifiltration.elements import PosetElement
from .geometry import Metric, PointSet
from .greedy import PersistentNet
from .lp.types import Constraint
from .sparseballs import SparseBallSystem, covering_weights_at
from .staircase import Breakpoint, WeightStaircase, grades


logger = logging.getLogger(__name__)

MAX_BRUTE_POINTS = 14
BISECTION_TOLERANCE = 1e-7
EVENT_OFFSET = 1e-7
CONTACT_TOLERANCE = 1e-12


class OracleLimitError(ValueError):
    """The input is too large for exhaustive enumeration."""


def approximation_factors(eps: float) -> tuple[float, float]:
    """Scale factors of the two cover inclusions: ``(1 + 3 eps, (1 + 2 eps) / (1 + eps))``."""

    return 1.0 + 3.0 * eps, (1.0 + 2.0 * eps) / (1.0 + eps)


@dataclass(frozen=True, slots=True)
class MembershipProbe:
    """Query ``p`` at scale ``r`` and order ``k``; ``p`` is coordinates or a point index."""

    p: Any
    r: float
    k: int

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError(f"probe scale must be non-negative, got {self.r}")
        if self.k < 1:
            raise ValueError(f"probe order must be positive, got {self.k}")


def _probe_distances(ps: PointSet, p: Any) -> np.ndarray:
    if isinstance(p, (int, np.integer)):
        return np.asarray(ps.row(int(p)))
    return ps.distances_to(np.asarray(p, dtype=np.float64))[0]


def in_cover(ps: PointSet, probe: MembershipProbe) -> bool:
    """Whether at least ``k`` points lie within ``r`` of the probe."""

    return int(np.count_nonzero(_probe_distances(ps, probe.p) <= probe.r)) >= probe.k


def sparse_weight(
    sys: SparseBallSystem, net: PersistentNet, distances: np.ndarray, r: float
) -> np.ndarray:
    """Summed covering weight of the sparse balls containing each probe.

    ``distances`` has one row per probe.  Taking every ball that contains the
    probe maximizes the weight over admissible subsets.
    """

    radii = sys.radii(r)
    inside = np.atleast_2d(distances) <= radii
    return inside.astype(np.int64) @ covering_weights_at(sys, net, r)


def in_sparse_cover(
    sys: SparseBallSystem, net: PersistentNet, ps: PointSet, probe: MembershipProbe
) -> bool:
    distances = _probe_distances(ps, probe.p)
    return int(sparse_weight(sys, net, distances, probe.r)[0]) >= probe.k


@dataclass(frozen=True, slots=True)
class InterleavingViolation:
    inclusion: str
    probe: tuple[float, ...]
    r: float
    k: int

    def as_dict(self) -> dict[str, Any]:
        return {"inclusion": self.inclusion, "probe": list(self.probe), "r": self.r, "k": self.k}


@dataclass(frozen=True, slots=True)
class InterleavingReport:
    eps: float
    checked: int
    violation_count: int
    violations: tuple[InterleavingViolation, ...]
    factors: tuple[float, float]

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "eps": self.eps,
            "checked": self.checked,
            "violations": self.violation_count,
            "witnesses": [violation.as_dict() for violation in self.violations],
            "factors": list(self.factors),
        }


def sample_probes(
    sys: SparseBallSystem, ps: PointSet, num_probes: int, rng: np.random.Generator, max_scale: float
) -> np.ndarray:
    """Random probes in the inflated bounding box, data points and pairwise midpoints."""

    if ps.coords is None:
        raise TypeError("probes need Euclidean coordinates")
    coords = ps.coords
    reach = max_scale * (1.0 + 3.0 * sys.eps)
    low = coords.min(axis=0) - reach
    high = coords.max(axis=0) + reach
    random = rng.uniform(low, high, size=(num_probes, coords.shape[1]))
    pairs = np.array(list(combinations(range(ps.n), 2)), dtype=np.intp).reshape(-1, 2)
    midpoints = 0.5 * (coords[pairs[:, 0]] + coords[pairs[:, 1]])
    return np.vstack([random, coords, midpoints])


def check_interleaving(
    sys: SparseBallSystem,
    net: PersistentNet,
    ps: PointSet,
    num_probes: int = 200,
    num_scales: int = 20,
    seed: int = 0,
    *,
    max_k: int = 5,
    max_witnesses: int = 20,
) -> InterleavingReport:
    """Sample both cover inclusions and report every violated ``(p, r, k)``."""

    if ps.coords is None:
        raise TypeError("interleaving checks need Euclidean coordinates")
    rng = np.random.default_rng(seed)
    diameter = float(ps.distances.max()) or 1.0
    scales = diameter * rng.uniform(0.0, 1.0, size=num_scales) ** 2
    probes = sample_probes(sys, ps, num_probes, rng, diameter)
    distances = ps.distances_to(probes)
    grow, shrink = approximation_factors(sys.eps)
    orders = np.arange(1, max_k + 1)

    checked = 0
    count = 0
    witnesses: list[InterleavingViolation] = []
    for r in scales.tolist():
        plain = np.count_nonzero(distances <= r, axis=1)
        plain_shrunk = np.count_nonzero(distances <= shrink * r, axis=1)
        sparse_grown = sparse_weight(sys, net, distances, grow * r)
        sparse = sparse_weight(sys, net, distances, r)
        for inclusion, covered, required in (
            ("cover-in-sparse", plain, sparse_grown),
            ("sparse-in-cover", sparse, plain_shrunk),
        ):
            broken = (covered[:, None] >= orders) & (required[:, None] < orders)
            checked += broken.size
            for probe_index, order_index in np.argwhere(broken):
                count += 1
                if len(witnesses) < max_witnesses:
                    witnesses.append(
                        InterleavingViolation(
                            inclusion=inclusion,
                            probe=tuple(float(v) for v in probes[probe_index]),
                            r=r,
                            k=int(orders[order_index]),
                        )
                    )
    if count:
        logger.warning("%d interleaving violations at eps=%s", count, sys.eps)
    return InterleavingReport(
        eps=sys.eps,
        checked=checked,
        violation_count=count,
        violations=tuple(witnesses),
        factors=(grow, shrink),
    )


def minimize_max_quadratic(
    points: np.ndarray,
    weights: np.ndarray,
    offsets: np.ndarray,
    *,
    levels: int = 12,
    per_axis: int = 9,
) -> tuple[np.ndarray, float]:
    """Minimize ``max_i weights_i * ||z - points_i||^2 - offsets_i`` over ``z``.

    A grid around the best point found so far is refined level by level,
    then a log-sum-exp smoothing of the maximum is driven to zero
    temperature with damped Newton steps.
    """

    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)

    def objective(z: np.ndarray) -> np.ndarray:
        squared = ((z[..., None, :] - points) ** 2).sum(axis=-1)
        return (weights * squared - offsets).max(axis=-1)

    dim = points.shape[1]
    low = points.min(axis=0)
    high = points.max(axis=0)
    center = 0.5 * (low + high)
    half_width = 0.5 * float((high - low).max()) or 1.0
    axis = np.linspace(-1.0, 1.0, per_axis)
    lattice = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    for _ in range(levels):
        candidates = center + half_width * lattice
        values = objective(candidates)
        center = candidates[int(np.argmin(values))]
        half_width *= 0.5
    return _smoothed_newton(center, points, weights, offsets, objective)


def _log_sum_exp(values: np.ndarray, temperature: float) -> float:
    top = float(values.max())
    return top + temperature * math.log(float(np.exp((values - top) / temperature).sum()))


def _smoothed_newton(
    z: np.ndarray,
    points: np.ndarray,
    weights: np.ndarray,
    offsets: np.ndarray,
    objective: Any,
) -> tuple[np.ndarray, float]:
    def pieces(at: np.ndarray) -> np.ndarray:
        return weights * ((at - points) ** 2).sum(axis=1) - offsets

    values = pieces(z)
    scale = max(1.0, abs(float(values.max())))
    temperature = max(float(values.max() - values.min()), scale * 1e-3)
    floor = 1e-15 * scale
    identity = np.eye(points.shape[1])
    while temperature > floor:
        for _ in range(60):
            values = pieces(z)
            shares = np.exp((values - values.max()) / temperature)
            shares /= shares.sum()
            slopes = 2.0 * weights[:, None] * (z - points)
            gradient = shares @ slopes
            hessian = (
                2.0 * float(shares @ weights) * identity
                + (slopes.T * shares) @ slopes / temperature
                - np.outer(gradient, gradient) / temperature
            )
            step = np.linalg.solve(hessian, gradient)
            current = _log_sum_exp(values, temperature)
            decrease = float(gradient @ step)
            t = 1.0
            while t > 1e-12:
                candidate = z - t * step
                if _log_sum_exp(pieces(candidate), temperature) <= current - 1e-4 * t * decrease:
                    break
                t *= 0.5
            else:
                break
            z = candidate
            if t * float(np.linalg.norm(step)) <= 1e-15 * (1.0 + float(np.linalg.norm(z))):
                break
        temperature *= 0.1
    return z, float(objective(z))


def descent_solve_M(H: Sequence[Constraint]) -> tuple[np.ndarray, float]:
    """Reference optimum of the minimum-reach problem by direct descent."""

    points = np.stack([c.p for c in H])
    alphas = np.array([c.alpha for c in H])
    betas = np.array([c.beta for c in H])
    return minimize_max_quadratic(points, 1.0 / alphas, betas / alphas)


def brute_miniball(points: Sequence[Sequence[float]] | np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest enclosing ball by trying the circumball of every small subset.

    Returns the center and the squared radius.
    """

    cloud = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n, dim = cloud.shape
    if dim > 3 or n > 64:
        raise OracleLimitError(f"brute miniball supports d <= 3 and n <= 64, got d={dim}, n={n}")
    best: tuple[np.ndarray, float] | None = None
    for size in range(1, min(n, dim + 1) + 1):
        for subset in combinations(range(n), size):
            chosen = cloud[list(subset)]
            center = _circumcenter(chosen)
            if center is None:
                continue
            squared = float(((chosen - center) ** 2).sum(axis=1).max())
            furthest = float(((cloud - center) ** 2).sum(axis=1).max())
            if furthest > squared * (1.0 + 1e-10) + 1e-300:
                continue
            if best is None or squared < best[1]:
                best = (center, squared)
    if best is None:
        raise OracleLimitError("no enclosing circumball found")
    return best


def _circumcenter(chosen: np.ndarray) -> np.ndarray | None:
    # Equidistance: 2 (p_i - p_0) . z = |p_i|^2 - |p_0|^2, with z in their affine hull.
    base = chosen[0]
    if len(chosen) == 1:
        return base.copy()
    directions = chosen[1:] - base
    rank = np.linalg.matrix_rank(directions)
    if rank < len(directions):
        return None
    rhs = 0.5 * (directions**2).sum(axis=1)
    coefficients, *_ = np.linalg.lstsq(directions @ directions.T, rhs, rcond=None)
    return base + coefficients @ directions


def balls_meet(
    ps: PointSet, members: Sequence[int], radii: Sequence[float]
) -> bool:
    """Whether the closed balls around ``members`` with ``radii`` share a point.

    Boxes and one-dimensional balls are checked coordinatewise, planar discs
    through the leftmost point of the intersection (a disc's leftmost point
    or a crossing of two circles), finite metrics pairwise, and higher
    dimensional Euclidean balls by direct minimization.
    """

    rho = np.asarray(radii, dtype=np.float64)
    index = np.asarray(members, dtype=np.intp)
    slack = CONTACT_TOLERANCE * max(1.0, float(rho.max(initial=0.0)))
    if len(index) == 1:
        return True
    if ps.coords is None:
        block = ps.distances[np.ix_(index, index)]
        return bool(np.all(block <= rho[:, None] + rho[None, :] + slack))
    centers = ps.coords[index]
    if ps.metric is Metric.LINF or centers.shape[1] == 1:
        lower = (centers - rho[:, None]).max(axis=0)
        upper = (centers + rho[:, None]).min(axis=0)
        return bool(np.all(lower <= upper + slack))
    if centers.shape[1] == 2:
        return _discs_meet(centers, rho, slack)
    _, value = minimize_max_quadratic(centers, np.ones(len(index)), rho**2)
    return value <= slack * max(1.0, float(rho.max()))


def _discs_meet(centers: np.ndarray, rho: np.ndarray, slack: float) -> bool:
    candidates = [centers - np.column_stack([rho, np.zeros_like(rho)])]
    for i, j in combinations(range(len(rho)), 2):
        delta = centers[j] - centers[i]
        gap = float(np.hypot(*delta))
        if gap > rho[i] + rho[j] + slack:
            return False
        if gap < abs(rho[i] - rho[j]):
            continue
        along = (rho[i] ** 2 - rho[j] ** 2 + gap**2) / (2.0 * gap)
        height = math.sqrt(max(rho[i] ** 2 - along**2, 0.0))
        foot = centers[i] + along * delta / gap
        normal = np.array([-delta[1], delta[0]]) / gap
        candidates.append(np.vstack([foot + height * normal, foot - height * normal]))
    stacked = np.vstack(candidates)
    gaps = np.sqrt(((stacked[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
    return bool(np.any(np.all(gaps <= rho + slack, axis=1)))


def _meet_at(sys: SparseBallSystem, ps: PointSet, members: Sequence[int], s: float) -> bool:
    radii = [sys.radius(x, s) for x in members]
    if any(rho is None for rho in radii):
        return False
    return balls_meet(ps, members, [float(rho) for rho in radii if rho is not None])


def brute_first_intersection(
    sys: SparseBallSystem, ps: PointSet, members: Sequence[int]
) -> float | None:
    """First meeting scale of the sparse balls of ``members`` by bisection."""

    end = min(float(sys.dis[x]) for x in members)
    if len(members) == 1:
        return 0.0
    if math.isinf(end):
        raise ValueError("a subset of two or more points has a finite window")
    if not _meet_at(sys, ps, members, end):
        return None
    low, high = 0.0, end
    while high - low > BISECTION_TOLERANCE:
        middle = 0.5 * (low + high)
        if _meet_at(sys, ps, members, middle):
            high = middle
        else:
            low = middle
    return high


@dataclass
class _WeightCache:
    sys: SparseBallSystem
    net: PersistentNet
    cache: dict[float, np.ndarray] = field(default_factory=dict)

    def at(self, r: float) -> np.ndarray:
        if r not in self.cache:
            self.cache[r] = covering_weights_at(self.sys, self.net, r)
        return self.cache[r]


def _offset(r: float) -> float:
    return r + EVENT_OFFSET * max(1.0, r)


def _window_value(
    weights: _WeightCache, vertices: Sequence[int], r_star: float, r_end: float, r: float
) -> int:
    """Summed covering weight of an element at ``r``, frozen once its window closes."""

    if r < r_star:
        return 0
    at = min(_offset(r), r_end) if r < r_end else r_end
    return int(weights.at(at)[list(vertices)].sum())


def brute_elements(
    sys: SparseBallSystem,
    net: PersistentNet,
    ps: PointSet,
    *,
    max_points: int = MAX_BRUTE_POINTS,
) -> list[PosetElement]:
    """Every non-empty subset whose sparse balls meet, in canonical order."""

    if ps.n > max_points:
        raise OracleLimitError(f"brute-force enumeration is limited to {max_points} points, got {ps.n}")
    weights = _WeightCache(sys, net)
    events = sorted(float(d) for d in sys.finite_deletion_times)
    elements: list[PosetElement] = []
    for size in range(1, ps.n + 1):
        for vertices in combinations(range(ps.n), size):
            r_star = brute_first_intersection(sys, ps, vertices)
            if r_star is None:
                continue
            r_end = min(float(sys.dis[x]) for x in vertices)
            grid = [r_star, *(e for e in events if r_star < e < r_end)]
            steps: list[Breakpoint] = []
            for scale in grid:
                value = _window_value(weights, vertices, r_star, r_end, scale)
                if not steps or value > steps[-1][1]:
                    steps.append((scale, value))
            elements.append(
                PosetElement(
                    id=len(elements),
                    vertices=vertices,
                    r_star=r_star,
                    r_end=r_end,
                    staircase=WeightStaircase.from_breakpoints(steps),
                )
            )
    logger.info("brute force found %d elements among %d points", len(elements), ps.n)
    return elements


def brute_chains(
    sys: SparseBallSystem,
    net: PersistentNet,
    elements: Sequence[PosetElement],
    max_dim: int = 2,
) -> dict[tuple[tuple[int, ...], ...], tuple[Breakpoint, ...]]:
    """Grades of every nested chain, keyed by the members' vertex tuples.

    Membership at ``(r, k)`` is evaluated straight from the covering weights
    of every member at each event scale.
    """

    weights = _WeightCache(sys, net)
    events = sorted(float(d) for d in sys.finite_deletion_times)
    by_size = sorted(elements, key=lambda e: (e.size, e.vertices))
    contains = {
        e.vertices: [f for f in by_size if f.size > e.size and set(e.vertices) <= set(f.vertices)]
        for e in by_size
    }
    limit = None if max_dim < 0 else max_dim + 1
    result: dict[tuple[tuple[int, ...], ...], tuple[Breakpoint, ...]] = {}

    def grade(chain: list[PosetElement]) -> tuple[Breakpoint, ...]:
        start = max(m.r_star for m in chain)
        steps: list[Breakpoint] = []
        for scale in [start, *(e for e in events if e > start)]:
            value = min(
                _window_value(weights, m.vertices, m.r_star, m.r_end, scale) for m in chain
            )
            if not steps or value > steps[-1][1]:
                steps.append((scale, value))
        return grades(WeightStaircase.from_breakpoints(steps))

    def extend(chain: list[PosetElement]) -> None:
        result[tuple(m.vertices for m in chain)] = grade(chain)
        if limit is not None and len(chain) >= limit:
            return
        for following in contains[chain[-1].vertices]:
            extend([*chain, following])

    for element in by_size:
        extend([element])
    return result


SCALE_TOLERANCE = 1e-6


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= SCALE_TOLERANCE * max(1.0, abs(a), abs(b))


def _steps_match(left: Sequence[Breakpoint], right: Sequence[Breakpoint]) -> bool:
    return len(left) == len(right) and all(
        _close(r0, r1) and k0 == k1 for (r0, k0), (r1, k1) in zip(left, right)
    )


def compare_elements(
    built: Sequence[PosetElement], reference: Sequence[PosetElement]
) -> list[str]:
    """Describe every difference between two element lists, matched by vertices."""

    mismatches: list[str] = []
    expected = {e.vertices: e for e in reference}
    found = {e.vertices: e for e in built}
    for vertices in sorted(expected.keys() - found.keys()):
        mismatches.append(f"missing element {list(vertices)}")
    for vertices in sorted(found.keys() - expected.keys()):
        mismatches.append(f"unexpected element {list(vertices)}")
    for vertices in sorted(found.keys() & expected.keys()):
        ours, theirs = found[vertices], expected[vertices]
        if not _close(ours.r_star, theirs.r_star):
            mismatches.append(
                f"element {list(vertices)}: r_star {ours.r_star!r} != {theirs.r_star!r}"
            )
        elif not _steps_match(ours.staircase.breakpoints, theirs.staircase.breakpoints):
            mismatches.append(
                f"element {list(vertices)}: staircase {list(ours.staircase.breakpoints)} "
                f"!= {list(theirs.staircase.breakpoints)}"
            )
    return mismatches


def compare_chains(
    elements: Sequence[PosetElement],
    chains: Sequence[Any],
    reference: dict[tuple[tuple[int, ...], ...], tuple[Breakpoint, ...]],
) -> list[str]:
    """Compare built chains against :func:`brute_chains` output."""

    found = {tuple(elements[i].vertices for i in chain.elements): chain.grades for chain in chains}
    mismatches = [f"missing chain {key}" for key in sorted(reference.keys() - found.keys())]
    mismatches += [f"unexpected chain {key}" for key in sorted(found.keys() - reference.keys())]
    for key in sorted(found.keys() & reference.keys()):
        if not _steps_match(found[key], reference[key]):
            mismatches.append(f"chain {key}: grades {list(found[key])} != {list(reference[key])}")
    return mismatches


__all__ = [
    "BISECTION_TOLERANCE",
    "SCALE_TOLERANCE",
    "compare_chains",
    "compare_elements",
    "InterleavingReport",
    "InterleavingViolation",
    "MAX_BRUTE_POINTS",
    "MembershipProbe",
    "OracleLimitError",
    "approximation_factors",
    "balls_meet",
    "brute_chains",
    "brute_elements",
    "brute_first_intersection",
    "brute_miniball",
    "check_interleaving",
    "descent_solve_M",
    "in_cover",
    "in_sparse_cover",
    "minimize_max_quadratic",
    "sample_probes",
    "sparse_weight",
]
