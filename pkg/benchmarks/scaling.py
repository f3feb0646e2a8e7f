"""Measure how elements, chains and build time grow with the number of points.

The default ``clusters`` family places small clusters at geometrically
growing distances from the origin, where friend lists stay short and the
linear-size regime is reached at a few hundred points.  Dense ``uniform``
clouds stay pre-asymptotic far longer: at ``eps = 1`` in the plane, 16 points
already give about six thousand elements, so keep ``--sizes`` to a dozen or
so points for that family.
"""

from __future__ import annotations

import argparse
import json
import statistics
import time

import numpy as np

from sparsemc.geometry import PointSet
from sparsemc.pipeline import build_bifiltration


DEFAULT_SIZES = (100, 200, 400, 800)
POINTS_PER_CLUSTER = 4
FAMILIES = ("clusters", "uniform")
# Cluster centres reach 2 ** (n / 4); squared reaches must stay finite.
MAX_CLUSTER_POINTS = 1000


def _percentiles(samples: list[float]) -> tuple[float, float]:
    ordered = sorted(samples)
    p95_index = max(0, (len(ordered) * 95 + 99) // 100 - 1)
    return statistics.median(ordered), ordered[p95_index]


def _uniform(n: int, dim: int, seed: int) -> PointSet:
    return PointSet.from_coordinates(np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, dim)))


def _clusters(n: int, dim: int, seed: int) -> PointSet:
    rng = np.random.default_rng(seed)
    rows = []
    for j in range(-(-n // POINTS_PER_CLUSTER)):
        centre = np.zeros(dim)
        centre[0] = 2.0**j
        rows.append(centre + 0.01 * 2.0**j * rng.uniform(-1.0, 1.0, size=(POINTS_PER_CLUSTER, dim)))
    return PointSet.from_coordinates(np.concatenate(rows)[:n])


def _measure(ps: PointSet, eps: float, max_dim: int, threads: int, samples: int) -> dict[str, object]:
    durations = []
    result = None
    for _ in range(samples):
        start = time.perf_counter()
        result = build_bifiltration(ps, eps, max_dim=max_dim, threads=threads, max_friends=10_000)
        durations.append(time.perf_counter() - start)
    assert result is not None
    report = result.report()
    median, p95 = _percentiles(durations)
    return {
        "n": ps.n,
        "elements": report.element_count,
        "chains": report.chain_count,
        "chains_per_n": report.chains_per_point,
        "max_friends": report.max_friends,
        "max_grades": report.max_grades,
        "median_seconds": median,
        "p95_seconds": p95,
    }


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--family", choices=FAMILIES, default="clusters")
    parser.add_argument("--sizes", type=int, nargs="+", default=list(DEFAULT_SIZES))
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--max-dim", type=int, default=2)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--samples", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    arguments = parser.parse_args()
    if arguments.samples <= 0:
        parser.error("--samples must be positive")
    if not 0.0 < arguments.epsilon <= 1.0:
        parser.error("--epsilon must be in (0,1]")
    if arguments.family == "clusters" and max(arguments.sizes) > MAX_CLUSTER_POINTS:
        parser.error(f"the clusters family is limited to {MAX_CLUSTER_POINTS} points")

    cloud = _clusters if arguments.family == "clusters" else _uniform
    rows = [
        _measure(
            cloud(n, arguments.dim, arguments.seed),
            arguments.epsilon,
            arguments.max_dim,
            arguments.threads,
            arguments.samples,
        )
        for n in arguments.sizes
    ]
    # Linear growth shows up as a flat chains_per_n column.
    print(
        json.dumps(
            {"family": arguments.family, "dim": arguments.dim, "epsilon": arguments.epsilon, "rows": rows},
            indent=2,
        )
    )


if __name__ == "__main__":
    main()
