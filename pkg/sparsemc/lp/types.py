"""Constraints and bases of the minimum-reach problem."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import math

import numpy as np


class NumericalFailure(RuntimeError):
    """Floating-point tolerances broke an exact-arithmetic guarantee.

    ``labels`` names the constraints involved when they are known.
    """

    def __init__(self, message: str, *, labels: Sequence[int | None] = ()) -> None:
        self.labels = tuple(labels)
        super().__init__(message)


@dataclass(frozen=True, slots=True, eq=False)
class Constraint:
    """``||p - z||^2 <= alpha * s + beta`` for a point ``p``.

    ``label`` is an optional caller-side identifier (usually the position in
    the input list) that bases carry along.
    """

    p: np.ndarray
    alpha: float
    beta: float
    label: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        point = np.array(self.p, dtype=np.float64).reshape(-1)
        if point.size == 0:
            raise ValueError("a constraint point needs at least one coordinate")
        if not np.all(np.isfinite(point)):
            raise ValueError("constraint points must be finite")
        point.setflags(write=False)
        object.__setattr__(self, "p", point)
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not math.isfinite(alpha) or alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not math.isfinite(beta) or beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def of(
        cls,
        p: Sequence[float] | np.ndarray,
        alpha: float = 1.0,
        beta: float = 0.0,
        label: int | None = None,
    ) -> Constraint:
        return cls(np.asarray(p, dtype=np.float64), alpha, beta, label)

    @property
    def dim(self) -> int:
        return int(self.p.shape[0])

    def with_label(self, label: int) -> Constraint:
        return Constraint(self.p, self.alpha, self.beta, label)


@dataclass(frozen=True, slots=True, eq=False)
class Basis:
    """A set of at most ``d + 1`` tangent constraints with their center."""

    constraints: tuple[Constraint, ...]
    center: np.ndarray
    value: float

    @property
    def labels(self) -> tuple[int | None, ...]:
        return tuple(constraint.label for constraint in self.constraints)

    def __contains__(self, constraint: object) -> bool:
        return any(constraint is member for member in self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)


__all__ = ["Basis", "Constraint", "NumericalFailure"]
