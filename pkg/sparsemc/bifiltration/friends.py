"""Friend lists: the earlier points that may share an element with a point."""

from __future__ import annotations

import numpy as np

from ..geometry import PointSet
from ..greedy import PersistentNet
from ..sparseballs import SparseBallSystem


def friend_radius(sys: SparseBallSystem, x: int) -> float:
    """Distance within which an earlier point may share an element with ``x``."""

    return 2.0 * (1.0 + 3.0 * sys.eps) * float(sys.slow[x])


def friends(net: PersistentNet, sys: SparseBallSystem, ps: PointSet, x: int) -> tuple[int, ...]:
    """Points inserted before ``x`` within :func:`friend_radius`, by greedy rank."""

    earlier = np.asarray(net.order[: net.rank[x]], dtype=np.intp)
    if earlier.size == 0:
        return ()
    near = earlier[ps.row(x)[earlier] <= friend_radius(sys, x)]
    return tuple(int(y) for y in near)


def all_friends(
    net: PersistentNet, sys: SparseBallSystem, ps: PointSet
) -> tuple[tuple[int, ...], ...]:
    return tuple(friends(net, sys, ps, x) for x in range(net.n))


__all__ = ["all_friends", "friend_radius", "friends"]
