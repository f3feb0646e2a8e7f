"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from sparsemc.geometry import Metric, PointSet
from sparsemc.greedy import PersistentNet, covering_sequences, gonzalez
from sparsemc.sparseballs import RadiusVariant, SparseBallSystem


def random_cloud(n: int, dim: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, dim))


def geometric_clusters(
    clusters: int, per_cluster: int, dim: int = 2, seed: int = 0, ratio: float = 2.0
) -> np.ndarray:
    """Small random clusters whose centres sit at ``ratio ** j`` on the first axis.

    Each cluster spans about one percent of its centre's distance to the
    origin, so friend lists stay short and the element count grows linearly.
    """

    rng = np.random.default_rng(seed)
    rows = []
    for j in range(clusters):
        centre = np.zeros(dim)
        centre[0] = ratio**j
        spread = 0.01 * ratio**j
        rows.append(centre + spread * rng.uniform(-1.0, 1.0, size=(per_cluster, dim)))
    return np.concatenate(rows)


def prepared(
    ps: PointSet, eps: float, variant: RadiusVariant | None = None
) -> tuple[PersistentNet, SparseBallSystem]:
    if variant is None:
        variant = RadiusVariant.QUADRATIC if ps.metric is Metric.L2 else RadiusVariant.LINEAR_U
    net = covering_sequences(gonzalez(ps), eps)
    return net, SparseBallSystem.from_net(net, eps, variant)
