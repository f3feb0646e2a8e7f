"""Randomized LP-type solver for the minimum-reach problem.

Minimize ``s`` subject to ``||p_i - z||^2 <= alpha_i s + beta_i``.  The driver
keeps a basis, scans the constraints in a seeded random order, and on each
violation recomputes the basis and moves the violating constraint to the
front.  It stops after a full cycle without violations.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations
import logging
from typing import Any

import numpy as np

from .center import center_candidates, reach
from .types import Basis, Constraint, NumericalFailure


logger = logging.getLogger(__name__)

VIOLATION_TOLERANCE = 1e-9


def tolerance(value: float) -> float:
    return VIOLATION_TOLERANCE * max(1.0, abs(value))


def violation_test(h: Constraint, F: Basis) -> bool:
    """Whether adding ``h`` to ``F`` raises the optimum."""

    if h in F:
        return False
    return reach(F.center, h) > F.value + tolerance(F.value)


def basis_computation(h: Constraint, G: Basis) -> Basis:
    """Basis of ``G`` plus a violating constraint ``h``.

    Subsets containing ``h`` are tried by increasing size, lexicographically
    within a size, and the first whose center satisfies every constraint of
    ``G`` and ``h`` wins.  Subsets with repeated points are skipped since
    no basis contains two constraints on the same point.
    """

    pool = G.constraints
    everything = (*pool, h)
    dim = h.dim
    for size in range(1, min(len(pool) + 1, dim + 1) + 1):
        for rest in combinations(pool, size - 1):
            subset = (*rest, h)
            if _repeats_point(subset):
                continue
            for center, value in center_candidates(subset):
                slack = tolerance(value)
                if all(reach(center, g) <= value + slack for g in everything):
                    return Basis(constraints=subset, center=center, value=value)
    raise NumericalFailure(
        f"no subset of {len(everything)} constraints forms a basis; "
        "tolerances are too tight for this input",
        labels=[constraint.label for constraint in everything],
    )


@dataclass(frozen=True, slots=True, eq=False)
class Solution:
    center: np.ndarray
    value: float
    basis: Basis

    def __iter__(self) -> Iterator[Any]:
        return iter((self.center, self.value, self.basis))


def solve_M(H: Sequence[Constraint], seed: int = 0) -> Solution:
    """Global optimum ``(z, s, basis)`` of the minimum-reach problem over ``H``.

    Constraints lacking a label are labelled with their position in ``H``.
    The result is deterministic for a given ``seed``.
    """

    if not H:
        raise ValueError("need at least one constraint")
    dim = H[0].dim
    if any(constraint.dim != dim for constraint in H):
        raise ValueError("constraint dimensions differ")
    constraints = [
        constraint if constraint.label is not None else constraint.with_label(position)
        for position, constraint in enumerate(H)
    ]
    rng = np.random.default_rng(seed)
    order = [constraints[int(i)] for i in rng.permutation(len(constraints))]

    first = order[0]
    basis = Basis(constraints=(first,), center=first.p.copy(), value=-first.beta / first.alpha)
    # Each basis change strictly raises the value, so the number of changes
    # is finite; the cap only turns a tolerance-induced cycle into an error.
    budget = 64 * len(order) * (dim + 2) + 1024
    position = 1 % len(order)
    clean = 0
    while clean < len(order):
        h = order[position]
        if violation_test(h, basis):
            budget -= 1
            if budget < 0:
                raise NumericalFailure(
                    "basis changes did not settle", labels=basis.labels
                )
            basis = basis_computation(h, basis)
            order.insert(0, order.pop(position))
            clean = 0
        else:
            clean += 1
        position = (position + 1) % len(order)
    logger.debug(
        "solved %d constraints: value %r with a basis of %d", len(order), basis.value, len(basis)
    )
    return Solution(center=basis.center, value=basis.value, basis=basis)


def _repeats_point(subset: Sequence[Constraint]) -> bool:
    for i, first in enumerate(subset):
        for second in subset[i + 1 :]:
            if np.array_equal(first.p, second.p):
                return True
    return False


__all__ = [
    "Solution",
    "VIOLATION_TOLERANCE",
    "basis_computation",
    "solve_M",
    "tolerance",
    "violation_test",
]
