"""Sparse balls: radius functions, the covering map and covering weights."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .geometry import PointSet
from .greedy import PersistentNet, deletion_times, slowing_times, validate_epsilon
from .staircase import WeightStaircase, from_jumps


# Relative slack for the covering-lemma comparisons, which hold exactly in
# real arithmetic and may be off by a rounding at the boundary scales.
LEMMA_TOLERANCE = 1e-12


class RadiusVariant(Enum):
    """Radius function used after a ball starts slowing down."""

    QUADRATIC = "quadratic"
    LINEAR_U = "linearU"


@dataclass(frozen=True, slots=True, eq=False)
class SparseBallSystem:
    """Per-point slowing and deletion times for one ``eps`` and radius variant."""

    eps: float
    variant: RadiusVariant
    slow: np.ndarray = field(repr=False)
    dis: np.ndarray = field(repr=False)

    @classmethod
    def from_net(
        cls,
        net: PersistentNet,
        eps: float,
        variant: RadiusVariant = RadiusVariant.QUADRATIC,
    ) -> SparseBallSystem:
        eps = validate_epsilon(eps)
        slow = slowing_times(net.ins, eps)
        dis = deletion_times(net.ins, eps)
        slow.setflags(write=False)
        dis.setflags(write=False)
        return cls(eps=eps, variant=variant, slow=slow, dis=dis)

    @property
    def n(self) -> int:
        return int(self.slow.shape[0])

    @property
    def k_eps(self) -> float:
        return 1.0 / (3.0 * (1.0 + self.eps) ** 2)

    @property
    def finite_deletion_times(self) -> np.ndarray:
        return self.dis[np.isfinite(self.dis)]

    def radius(self, x: int, r: float) -> float | None:
        """Radius of the sparse ball of ``x`` at scale ``r``; ``None`` once deleted."""

        if r < 0:
            raise ValueError(f"scale must be non-negative, got {r}")
        slow = float(self.slow[x])
        if r > self.dis[x]:
            return None
        if r <= slow:
            return float(r)
        if self.variant is RadiusVariant.QUADRATIC:
            k = self.k_eps
            return math.sqrt(k * r * r + (1.0 - k) * slow * slow)
        return self._linear_slope * r + self._linear_offset * slow

    def radii(self, r: float) -> np.ndarray:
        """Radii of every sparse ball at ``r``, ``nan`` for deleted balls."""

        out = np.full(self.n, np.nan)
        alive = r <= self.dis
        plain = alive & (r <= self.slow)
        slowed = alive & ~plain
        out[plain] = r
        slow = self.slow[slowed]
        if self.variant is RadiusVariant.QUADRATIC:
            k = self.k_eps
            out[slowed] = np.sqrt(k * r * r + (1.0 - k) * slow * slow)
        else:
            out[slowed] = self._linear_slope * r + self._linear_offset * slow
        return out

    def lower_envelope(self, x: int, r: float) -> float:
        eps = self.eps
        return r / (1.0 + 3.0 * eps) + eps / (1.0 + eps) * float(self.slow[x])

    def upper_envelope(self, x: int, r: float) -> float:
        return self._linear_slope * r + self._linear_offset * float(self.slow[x])

    @property
    def _linear_slope(self) -> float:
        return 1.0 / (3.0 * (1.0 + self.eps))

    @property
    def _linear_offset(self) -> float:
        return (2.0 + 3.0 * self.eps) / (3.0 * (1.0 + self.eps))


def radius(sys: SparseBallSystem, x: int, r: float) -> float | None:
    return sys.radius(x, r)


def in_sparse_ball(
    sys: SparseBallSystem,
    ps: PointSet,
    x: int,
    p: int | Sequence[float] | np.ndarray,
    r: float,
) -> bool:
    """Whether ``p`` lies in the closed sparse ball of ``x`` at scale ``r``.

    ``p`` is a point index, or a coordinate vector when ``ps`` is Euclidean.
    """

    rho = sys.radius(x, r)
    if rho is None:
        return False
    if isinstance(p, (int, np.integer)):
        distance = ps.dist(x, int(p))
    else:
        distance = float(ps.distances_to(np.asarray(p, dtype=np.float64))[0, x])
    return distance <= rho


def _check_system(sys: SparseBallSystem, net: PersistentNet) -> tuple[tuple[int, ...], ...]:
    sequences = net.require_covering()
    if net.eps != sys.eps:
        raise ValueError(
            f"covering sequences were built for eps={net.eps}, not eps={sys.eps}"
        )
    return sequences


def covering_map_at(sys: SparseBallSystem, net: PersistentNet, r: float) -> np.ndarray:
    """First entry of each covering sequence whose ball still exists at ``r``."""

    if r < 0:
        raise ValueError(f"scale must be non-negative, got {r}")
    sequences = _check_system(sys, net)
    image = np.empty(net.n, dtype=np.intp)
    for x, sequence in enumerate(sequences):
        for entry in sequence:
            if r <= sys.dis[entry]:
                image[x] = entry
                break
    return image


def covering_weights_at(sys: SparseBallSystem, net: PersistentNet, r: float) -> np.ndarray:
    """Preimage sizes of the covering map at ``r``."""

    return np.bincount(covering_map_at(sys, net, r), minlength=net.n)


def weight_staircases(sys: SparseBallSystem, net: PersistentNet) -> tuple[WeightStaircase, ...]:
    """Covering-weight staircase of every point on ``[0, dis(x)]``.

    A point's weight grows by one at ``dis(z)`` whenever some covering
    sequence passes from ``z`` to it.
    """

    sequences = _check_system(sys, net)
    jumps: list[list[tuple[float, int]]] = [[] for _ in range(net.n)]
    for sequence in sequences:
        for before, after in zip(sequence, sequence[1:]):
            jumps[after].append((float(sys.dis[before]), 1))
    return tuple(from_jumps(point_jumps) for point_jumps in jumps)


def weight_staircase(sys: SparseBallSystem, net: PersistentNet, x: int) -> WeightStaircase:
    return weight_staircases(sys, net)[x]


@dataclass(frozen=True, slots=True)
class PropertyCheck:
    name: str
    passed: bool
    witnesses: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True, slots=True)
class CoveringLemmaReport:
    scale: float
    image: PropertyCheck
    packing: PropertyCheck
    proximity: PropertyCheck

    @property
    def passed(self) -> bool:
        return self.image.passed and self.packing.passed and self.proximity.passed

    @property
    def checks(self) -> tuple[PropertyCheck, ...]:
        return (self.image, self.packing, self.proximity)


def check_covering_lemma(
    sys: SparseBallSystem,
    net: PersistentNet,
    ps: PointSet,
    r: float,
    *,
    max_witnesses: int = 10,
) -> CoveringLemmaReport:
    """Check the image, packing and proximity properties of the covering map.

    The image at ``r`` must be exactly the points whose ball still exists,
    distinct image points must be ``eps / ((1 + eps)(1 + 3 eps)) * r`` apart,
    and every point must lie within ``eps / (1 + eps) * min(r, slow(y))`` of
    its image ``y``.  Witnesses are point indices (pairs for the packing).
    """

    eps = sys.eps
    image_map = covering_map_at(sys, net, r)
    image = sorted(set(image_map.tolist()))
    alive = [int(x) for x in np.flatnonzero(r <= sys.dis)]

    mismatch = sorted(set(image).symmetric_difference(alive))
    image_check = PropertyCheck(
        "image",
        not mismatch,
        tuple((x,) for x in mismatch[:max_witnesses]),
    )

    spacing = eps / ((1.0 + eps) * (1.0 + 3.0 * eps)) * r
    close_pairs: list[tuple[int, ...]] = []
    if spacing > 0 and len(image) > 1:
        members = np.asarray(image, dtype=np.intp)
        block = ps.distances[np.ix_(members, members)]
        upper = np.triu(block < spacing * (1.0 - LEMMA_TOLERANCE), k=1)
        close_pairs = [
            (int(members[i]), int(members[j])) for i, j in np.argwhere(upper)[:max_witnesses]
        ]
    packing_check = PropertyCheck("packing", not close_pairs, tuple(close_pairs))

    far: list[tuple[int, ...]] = []
    factor = eps / (1.0 + eps)
    for x, y in enumerate(image_map.tolist()):
        bound = factor * min(r, float(sys.slow[y]))
        if ps.dist(x, y) > bound * (1.0 + LEMMA_TOLERANCE) + LEMMA_TOLERANCE:
            far.append((x, y))
            if len(far) >= max_witnesses:
                break
    proximity_check = PropertyCheck("proximity", not far, tuple(far))

    return CoveringLemmaReport(
        scale=float(r),
        image=image_check,
        packing=packing_check,
        proximity=proximity_check,
    )


__all__ = [
    "CoveringLemmaReport",
    "LEMMA_TOLERANCE",
    "PropertyCheck",
    "RadiusVariant",
    "SparseBallSystem",
    "check_covering_lemma",
    "covering_map_at",
    "covering_weights_at",
    "in_sparse_ball",
    "radius",
    "weight_staircase",
    "weight_staircases",
]
