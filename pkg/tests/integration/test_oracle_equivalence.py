from __future__ import annotations

import numpy as np
import pytest

from sparsemc.geometry import Metric, PointSet
from sparsemc.oracle import brute_chains, brute_elements, compare_chains, compare_elements
from sparsemc.pipeline import build_bifiltration
from support import random_cloud


def assert_matches_brute_force(ps: PointSet, eps: float, max_dim: int = 2) -> None:
    result = build_bifiltration(ps, eps, max_dim=max_dim, seed=3)
    reference = brute_elements(result.system, result.net, ps)

    assert compare_elements(result.elements, reference) == []
    expected = brute_chains(result.system, result.net, reference, max_dim)
    assert compare_chains(result.elements, result.chains, expected) == []


def distance_table(coordinates: np.ndarray) -> np.ndarray:
    return np.linalg.norm(coordinates[:, None, :] - coordinates[None, :, :], axis=-1)


def random_instance(seed: int, kind: str) -> PointSet:
    coordinates = random_cloud(6 + seed % 7, 2, seed=100 + seed)
    if kind == "box":
        return PointSet.from_coordinates(coordinates, Metric.LINF)
    if kind == "matrix":
        return PointSet.from_distance_matrix(distance_table(coordinates))
    return PointSet.from_coordinates(coordinates)


RANDOM_INSTANCES = [(seed, "plane") for seed in range(16)] + [
    (16, "box"),
    (17, "box"),
    (18, "matrix"),
    (19, "matrix"),
]


@pytest.mark.slow
@pytest.mark.parametrize(("seed", "kind"), RANDOM_INSTANCES)
def test_random_planar_instances_match_brute_force(seed, kind) -> None:
    assert_matches_brute_force(random_instance(seed, kind), 1.0, max_dim=1)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("eps", [1.0, 0.5])
def test_plane_clouds_match_brute_force(seed, eps) -> None:
    ps = PointSet.from_coordinates(random_cloud(7, 2, seed=seed))

    assert_matches_brute_force(ps, eps)


@pytest.mark.parametrize("seed", [4, 5])
def test_box_metric_clouds_match_brute_force(seed) -> None:
    ps = PointSet.from_coordinates(random_cloud(7, 2, seed=seed), Metric.LINF)

    assert_matches_brute_force(ps, 0.5)


def test_finite_metric_spaces_match_brute_force() -> None:
    ps = PointSet.from_distance_matrix(distance_table(random_cloud(7, 3, seed=6)))

    assert_matches_brute_force(ps, 0.5)


def test_space_clouds_match_brute_force() -> None:
    ps = PointSet.from_coordinates(random_cloud(7, 3, seed=7))

    assert_matches_brute_force(ps, 1.0, max_dim=1)


def test_line_with_unbounded_chain_dimension() -> None:
    ps = PointSet.from_coordinates([[0.0], [1.0], [3.0], [7.0], [15.0]])

    assert_matches_brute_force(ps, 1.0, max_dim=-1)
