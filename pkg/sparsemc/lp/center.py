"""Tangent centers of small constraint sets.

For a candidate basis ``F = (h_1, ..., h_k)`` the center ``z`` has equal reach
``s`` to every member and lies in the convex hull of the member points.
Writing ``z = p_1 + Q lam`` with ``Q = [p_2 - p_1, ..., p_k - p_1]`` the
tangency conditions become the linear system ``2 Q^T Q lam = E + D s`` plus the
single quadratic ``|Q lam|^2 = alpha_1 s + beta_1``.
"""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np

from .types import Constraint


SINGULARITY_BOUND = 1e12
HULL_TOLERANCE = 1e-10
LINEAR_TOLERANCE = 1e-14
FLOOR_TOLERANCE = 1e-9


def reach(z: Sequence[float] | np.ndarray, c: Constraint) -> float:
    """Smallest ``s`` for which ``z`` satisfies constraint ``c``."""

    offset = c.p - np.asarray(z, dtype=np.float64)
    return (float(offset @ offset) - c.beta) / c.alpha


def center_of_basis(F: Sequence[Constraint]) -> tuple[np.ndarray, float] | None:
    """Tangent center of ``F`` inside the hull of its points, or ``None``.

    ``None`` means ``F`` cannot be a basis: its points are affinely
    dependent, the tangency equation has no real root, or no root puts the
    center inside the convex hull.  Of two admissible roots the smaller one
    is returned.
    """

    candidates = center_candidates(F)
    return candidates[0] if candidates else None


def center_candidates(F: Sequence[Constraint]) -> list[tuple[np.ndarray, float]]:
    """Every admissible ``(z, s)`` of ``F``, sorted by increasing ``s``."""

    if not F:
        raise ValueError("a candidate basis needs at least one constraint")
    dim = F[0].dim
    if any(constraint.dim != dim for constraint in F):
        raise ValueError("constraint dimensions differ")
    for i, first in enumerate(F):
        for second in F[i + 1 :]:
            if np.array_equal(first.p, second.p):
                raise ValueError("candidate basis members must have distinct points")
    if len(F) > dim + 1:
        return []

    head = F[0]
    if len(F) == 1:
        return [(head.p.copy(), -head.beta / head.alpha)]

    Q = np.stack([constraint.p - head.p for constraint in F[1:]], axis=1)
    gram = Q.T @ Q
    if np.linalg.cond(gram) > SINGULARITY_BOUND:
        return []
    E = np.array(
        [Q[:, j] @ Q[:, j] + (head.beta - constraint.beta) for j, constraint in enumerate(F[1:])]
    )
    D = np.array([head.alpha - constraint.alpha for constraint in F[1:]])
    lam0 = np.linalg.solve(2.0 * gram, E)
    lam1 = np.linalg.solve(2.0 * gram, D)

    # |Q (lam0 + s lam1)|^2 = alpha_1 s + beta_1, a quadratic a s^2 + b s + c = 0.
    a = float(lam1 @ gram @ lam1)
    b = float(2.0 * (lam0 @ gram @ lam1)) - head.alpha
    c = float(lam0 @ gram @ lam0) - head.beta
    roots = _real_roots(a, b, c)

    floor = max(-constraint.beta / constraint.alpha for constraint in F)
    admissible: list[tuple[np.ndarray, float]] = []
    for s in sorted(roots):
        if s < floor - FLOOR_TOLERANCE * max(1.0, abs(floor)):
            continue
        lam = lam0 + s * lam1
        if np.any(lam < -HULL_TOLERANCE) or 1.0 - float(lam.sum()) < -HULL_TOLERANCE:
            continue
        admissible.append((head.p + Q @ lam, s))
    return admissible


def _real_roots(a: float, b: float, c: float) -> list[float]:
    scale = max(abs(a), abs(b), abs(c), 1.0)
    if abs(a) <= LINEAR_TOLERANCE * scale:
        if abs(b) <= LINEAR_TOLERANCE * scale:
            return []
        return [-c / b]
    discriminant = b * b - 4.0 * a * c
    if discriminant < 0:
        if discriminant < -LINEAR_TOLERANCE * max(b * b, abs(4.0 * a * c), 1.0):
            return []
        discriminant = 0.0
    root = math.sqrt(discriminant)
    # Avoid cancellation by pairing the larger-magnitude root with Vieta's formula.
    q = -0.5 * (b + math.copysign(root, b))
    if q == 0.0:
        return [0.0]
    return [q / a, c / q]


__all__ = ["center_candidates", "center_of_basis", "reach"]
