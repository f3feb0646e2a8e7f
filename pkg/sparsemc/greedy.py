"""Greedy (farthest-point) permutation and the covering sequences derived from it."""

from __future__ import annotations

from dataclasses import dataclass, replace
import logging
import math

import numpy as np

from .geometry import PointSet


logger = logging.getLogger(__name__)


def validate_epsilon(eps: float) -> float:
    """Return ``eps`` as a float after checking it lies in ``(0, 1]``."""

    if isinstance(eps, bool) or not isinstance(eps, (int, float)):
        raise TypeError(f"epsilon must be a real number, got {type(eps).__name__}")
    value = float(eps)
    if not math.isfinite(value) or not 0.0 < value <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps!r}")
    return value


def slowing_times(ins: np.ndarray, eps: float) -> np.ndarray:
    """Scale from which each ball grows slower than the plain radius."""

    eps = validate_epsilon(eps)
    return (1.0 + eps) / eps * np.asarray(ins, dtype=np.float64)


def deletion_times(ins: np.ndarray, eps: float) -> np.ndarray:
    """Scale at which each ball leaves the sparse cover."""

    eps = validate_epsilon(eps)
    return (1.0 + 3.0 * eps) * slowing_times(ins, eps)


@dataclass(frozen=True, slots=True, eq=False)
class PersistentNet:
    """Greedy order of a point set plus per-point insertion data.

    ``order[rank]`` is the point inserted at ``rank``; ``rank`` is its inverse.
    ``ins`` and ``leaders`` are indexed by point.  ``leaders[x]`` lists each
    change of the nearest already-inserted point of ``x`` as ``(rank, point)``,
    ending with ``x`` itself.  ``covering_seq`` is filled in by
    :func:`covering_sequences` for a fixed ``eps``.
    """

    order: tuple[int, ...]
    rank: tuple[int, ...]
    ins: np.ndarray
    leaders: tuple[tuple[tuple[int, int], ...], ...]
    covering_seq: tuple[tuple[int, ...], ...] | None = None
    eps: float | None = None

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def first(self) -> int:
        return self.order[0]

    def leader_at(self, x: int, rank: int) -> int:
        """Nearest point of ``x`` among the first ``rank + 1`` inserted points."""

        current = self.leaders[x][0][1]
        for changed_at, leader in self.leaders[x]:
            if changed_at > rank:
                break
            current = leader
        return current

    def leader_sequence(self, x: int) -> tuple[int, ...]:
        return tuple(leader for _, leader in self.leaders[x])

    def require_covering(self) -> tuple[tuple[int, ...], ...]:
        if self.covering_seq is None:
            raise ValueError("covering sequences have not been computed for this net")
        return self.covering_seq


def gonzalez(ps: PointSet, first: int = 0) -> PersistentNet:
    """Farthest-point ordering of ``ps`` starting from ``first``.

    Ties for the farthest point go to the smallest point index.  A point's
    leader only changes when a strictly closer point is inserted, so ties
    keep the earlier-ranked leader.
    """

    n = ps.n
    if not 0 <= first < n:
        raise ValueError(f"first point must be in [0, {n}), got {first}")

    distance_to_net = np.array(ps.row(first), dtype=np.float64, copy=True)
    ins = np.zeros(n, dtype=np.float64)
    ins[first] = math.inf
    leaders: list[list[tuple[int, int]]] = [[(0, first)] for _ in range(n)]
    order = [first]
    inserted = np.zeros(n, dtype=bool)
    inserted[first] = True

    for rank in range(1, n):
        candidates = np.where(inserted, -1.0, distance_to_net)
        point = int(np.argmax(candidates))
        ins[point] = distance_to_net[point]
        order.append(point)
        inserted[point] = True
        row = ps.row(point)
        closer = np.flatnonzero(row < distance_to_net)
        distance_to_net[closer] = row[closer]
        for x in closer.tolist():
            leaders[x].append((rank, point))

    rank_of = [0] * n
    for position, point in enumerate(order):
        rank_of[point] = position
    ins.setflags(write=False)
    logger.debug("greedy order of %d points starts at %d", n, first)
    return PersistentNet(
        order=tuple(order),
        rank=tuple(rank_of),
        ins=ins,
        leaders=tuple(tuple(changes) for changes in leaders),
    )


def covering_sequences(net: PersistentNet, eps: float) -> PersistentNet:
    """Attach the covering sequence of every point for ``eps``.

    Starting from ``x``, each step moves to the nearest point of ``x`` among
    those whose slowing time is at least the deletion time of the current
    entry.  Those points form a prefix of the greedy order because insertion
    radii never increase along it, so each step is a leader lookup.
    """

    eps = validate_epsilon(eps)
    slow = slowing_times(net.ins, eps)
    dis = deletion_times(net.ins, eps)
    slow_by_rank = -slow[list(net.order)]

    sequences: list[tuple[int, ...]] = []
    for x in range(net.n):
        sequence = [x]
        current = x
        while math.isfinite(slow[current]):
            threshold = dis[current]
            prefix = int(np.searchsorted(slow_by_rank, -threshold, side="right"))
            current = net.leader_at(x, prefix - 1)
            sequence.append(current)
        sequences.append(tuple(sequence))
    return replace(net, covering_seq=tuple(sequences), eps=eps)


def net_at(net: PersistentNet, r: float) -> frozenset[int]:
    """Points whose insertion radius is at least ``r``."""

    return frozenset(int(x) for x in np.flatnonzero(net.ins >= r))


__all__ = [
    "PersistentNet",
    "covering_sequences",
    "deletion_times",
    "gonzalez",
    "net_at",
    "slowing_times",
    "validate_epsilon",
]
