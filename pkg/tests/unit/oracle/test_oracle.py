from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from sparsemc.bifiltration import build_chains, build_elements
from sparsemc.geometry import Metric, PointSet
from sparsemc.oracle import (
    MembershipProbe,
    OracleLimitError,
    approximation_factors,
    balls_meet,
    brute_chains,
    brute_elements,
    brute_first_intersection,
    brute_miniball,
    check_interleaving,
    compare_chains,
    compare_elements,
    in_cover,
    in_sparse_cover,
    minimize_max_quadratic,
)
from support import prepared, random_cloud


def test_approximation_factors() -> None:
    assert approximation_factors(1.0) == (4.0, 1.5)
    grow, shrink = approximation_factors(0.1)
    assert grow == pytest.approx(1.3)
    assert shrink == pytest.approx(1.2 / 1.1)


def test_plain_cover_counts_points_within_the_scale(line_points) -> None:
    assert in_cover(line_points, MembershipProbe([2.0], 1.0, 2))
    assert not in_cover(line_points, MembershipProbe([2.0], 1.0, 3))
    assert in_cover(line_points, MembershipProbe(2, 3.0, 3))
    with pytest.raises(ValueError, match="order must be positive"):
        MembershipProbe([0.0], 1.0, 0)
    with pytest.raises(ValueError, match="scale must be non-negative"):
        MembershipProbe([0.0], -1.0, 1)


def test_sparse_cover_uses_covering_weights(line_points, line_net, line_system) -> None:
    # At r = 30 only points 0 and 3 keep balls; point 0 carries three points
    # and the slowed ball of point 3 reaches down to about -8.96.
    assert in_sparse_cover(line_system, line_net, line_points, MembershipProbe([-10.0], 30.0, 3))
    assert not in_sparse_cover(line_system, line_net, line_points, MembershipProbe([-10.0], 30.0, 4))
    assert in_sparse_cover(line_system, line_net, line_points, MembershipProbe([5.0], 30.0, 4))


@pytest.mark.parametrize(
    ("dim", "metric"), [(1, Metric.L2), (2, Metric.L2), (3, Metric.L2), (2, Metric.LINF)]
)
def test_sampled_interleaving_holds_on_random_clouds(dim, metric) -> None:
    ps = PointSet.from_coordinates(random_cloud(30, dim, seed=dim), metric)
    net, system = prepared(ps, 0.5)

    report = check_interleaving(system, net, ps, num_probes=60, num_scales=8, seed=1, max_k=4)

    assert report.passed, report.as_dict()["witnesses"]
    assert report.checked > 0


def test_interleaving_reports_witnesses_when_weights_are_wrong(
    line_points, line_net, line_system, mocker
) -> None:
    mocker.patch("sparsemc.oracle.covering_weights_at", return_value=np.zeros(4, dtype=np.int64))

    report = check_interleaving(line_system, line_net, line_points, num_probes=10, num_scales=4)

    assert not report.passed
    assert report.violations[0].inclusion == "cover-in-sparse"
    assert report.as_dict()["violations"] == report.violation_count
    assert len(report.violations) <= 20


def test_balls_meet_in_each_geometry() -> None:
    plane = PointSet.from_coordinates([[0.0, 0.0], [2.0, 0.0], [1.0, 2.0]])
    assert balls_meet(plane, [0, 1, 2], [1.3, 1.3, 1.3])
    assert not balls_meet(plane, [0, 1, 2], [1.0, 1.0, 1.0])

    box = PointSet.from_coordinates([[0.0, 0.0], [2.0, 2.0]], Metric.LINF)
    assert balls_meet(box, [0, 1], [1.0, 1.0])
    assert not balls_meet(box, [0, 1], [0.9, 1.0])

    space = PointSet.from_coordinates(
        [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]]
    )
    assert balls_meet(space, [0, 1, 2, 3], [1.7, 1.7, 1.7, 1.7])
    assert not balls_meet(space, [0, 1, 2, 3], [1.6, 1.6, 1.6, 1.6])

    metric = PointSet.from_distance_matrix([[0, 2, 3], [2, 0, 4], [3, 4, 0]])
    assert balls_meet(metric, [0, 1, 2], [1.5, 1.5, 2.5])
    assert not balls_meet(metric, [0, 1, 2], [1.0, 0.5, 2.5])


def test_minimize_max_quadratic_finds_the_circumcenter() -> None:
    points = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])

    z, value = minimize_max_quadratic(points, np.ones(3), np.zeros(3))

    assert z == pytest.approx([1.0, 1.0], abs=1e-6)
    assert value == pytest.approx(2.0, rel=1e-9)


def test_brute_miniball_and_its_limits() -> None:
    center, squared = brute_miniball([[0.0, 0.0], [4.0, 0.0], [2.0, 1.0]])
    assert center.tolist() == pytest.approx([2.0, 0.0])
    assert squared == pytest.approx(4.0)

    with pytest.raises(OracleLimitError, match="d <= 3"):
        brute_miniball(np.zeros((3, 4)))


def test_bisection_matches_the_exact_pair_scales(line_points, line_system) -> None:
    assert brute_first_intersection(line_system, line_points, [0, 3]) == pytest.approx(3.5, abs=1e-6)
    assert brute_first_intersection(line_system, line_points, [2]) == 0.0
    far = PointSet.from_coordinates([[0.0], [1.0], [100.0]])
    _, system = prepared(far, 0.1)
    assert brute_first_intersection(system, far, [1, 2]) is None


def test_brute_force_reproduces_the_line_instance(line_points, line_net, line_system) -> None:
    built = build_elements(line_net, line_system, line_points)
    reference = brute_elements(line_system, line_net, line_points)

    assert compare_elements(built, reference) == []
    chains = build_chains(built)
    assert compare_chains(built, chains, brute_chains(line_system, line_net, reference)) == []


def test_comparisons_name_the_differences(line_points, line_net, line_system) -> None:
    built = build_elements(line_net, line_system, line_points)
    reference = brute_elements(line_system, line_net, line_points)

    report = compare_elements(built[:-1], reference)
    assert report == ["missing element [0, 1, 2, 3]"]

    chains = build_chains(built, max_dim=1)
    expected = brute_chains(line_system, line_net, reference, max_dim=2)
    assert any(line.startswith("missing chain") for line in compare_chains(built, chains, expected))


def test_brute_force_refuses_large_inputs() -> None:
    ps = PointSet.from_coordinates(random_cloud(15, 2, seed=0))
    net, system = prepared(ps, 0.5)

    with pytest.raises(OracleLimitError, match="limited to 14 points"):
        brute_elements(system, net, ps)


def test_pair_elements_agree_with_pairwise_radius_sums() -> None:
    ps = PointSet.from_coordinates(random_cloud(9, 2, seed=31))
    net, system = prepared(ps, 1.0)
    reference = {e.vertices: e for e in brute_elements(system, net, ps)}

    for x, y in combinations(range(ps.n), 2):
        element = reference.get((x, y))
        if element is None:
            continue
        r = element.r_star
        assert system.radius(x, r) + system.radius(y, r) >= ps.dist(x, y) - 1e-6
