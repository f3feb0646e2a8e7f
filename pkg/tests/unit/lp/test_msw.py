from __future__ import annotations

import numpy as np
import pytest

from sparsemc.lp import (
    Basis,
    Constraint,
    NumericalFailure,
    basis_computation,
    center_candidates,
    center_of_basis,
    reach,
    solve_M,
    violation_test,
)
from sparsemc.oracle import brute_miniball, descent_solve_M


def plain(points) -> list[Constraint]:
    return [Constraint.of(point) for point in points]


def test_right_triangle_is_enclosed_by_its_hypotenuse_ball() -> None:
    solution = solve_M(plain([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]))

    assert solution.center.tolist() == pytest.approx([1.0, 1.0])
    assert solution.value == pytest.approx(2.0)
    assert sorted(solution.basis.labels) == [1, 2]


def test_obtuse_triangle_only_needs_its_longest_side() -> None:
    z, s, basis = solve_M(plain([[0.0, 0.0], [4.0, 0.0], [2.0, 1.0]]))

    assert z.tolist() == pytest.approx([2.0, 0.0])
    assert s == pytest.approx(4.0)
    assert sorted(basis.labels) == [0, 1]


def test_single_constraint_sits_at_its_point_with_the_feasibility_floor() -> None:
    z, s, basis = solve_M([Constraint.of([3.0, -1.0], alpha=2.0, beta=6.0)])

    assert z.tolist() == [3.0, -1.0]
    assert s == pytest.approx(-3.0)
    assert basis.labels == (0,)


def test_weighted_constraints_meet_where_both_are_tight() -> None:
    H = [Constraint.of([0.0], 1.0, 0.0), Constraint.of([4.0], 1.0, 8.0)]

    z, s, _ = solve_M(H)

    assert z.tolist() == pytest.approx([1.0])
    assert s == pytest.approx(1.0)
    assert all(reach(z, h) <= s + 1e-9 for h in H)


def test_a_slack_constraint_stays_out_of_the_basis() -> None:
    H = [Constraint.of([0.0], 1.0, 0.0), Constraint.of([1.0], 1.0, 100.0)]

    z, s, basis = solve_M(H, seed=5)

    assert z.tolist() == pytest.approx([0.0])
    assert s == pytest.approx(0.0)
    assert basis.labels == (0,)


def test_caller_labels_are_kept_in_the_basis() -> None:
    H = [Constraint.of([0.0], label=10), Constraint.of([2.0], label=20)]

    assert sorted(solve_M(H).basis.labels) == [10, 20]


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_unit_weights_give_the_smallest_enclosing_ball(dim: int) -> None:
    rng = np.random.default_rng(dim)
    for _ in range(50):
        points = rng.normal(size=(int(rng.integers(2, 15)), dim))
        center, squared = brute_miniball(points)

        z, s, basis = solve_M(plain(points), seed=int(rng.integers(1000)))

        assert abs(s - squared) <= 1e-9
        assert z == pytest.approx(center, abs=1e-6)
        assert len(basis) <= dim + 1


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_general_weights_match_the_descent_reference(dim: int) -> None:
    rng = np.random.default_rng(40 + dim)
    for _ in range(4):
        n = 8
        H = [
            Constraint.of(p, alpha, beta)
            for p, alpha, beta in zip(
                rng.uniform(0.0, 1.0, size=(n, dim)),
                rng.uniform(0.05, 1.0, size=n),
                rng.uniform(0.0, 0.3, size=n),
            )
        ]

        _, s, _ = solve_M(H)
        _, reference = descent_solve_M(H)

        assert s == pytest.approx(reference, rel=1e-6, abs=1e-9)


def test_translating_every_point_moves_the_center_and_keeps_the_value() -> None:
    rng = np.random.default_rng(17)
    for _ in range(20):
        dim = int(rng.integers(1, 4))
        n = int(rng.integers(2, 12))
        points = rng.normal(size=(n, dim))
        alphas = rng.uniform(0.1, 1.0, size=n)
        betas = rng.uniform(0.0, 0.5, size=n)
        shift = rng.uniform(-50.0, 50.0, size=dim)

        z, s, _ = solve_M([Constraint.of(p, a, b) for p, a, b in zip(points, alphas, betas)], seed=2)
        moved_z, moved_s, _ = solve_M(
            [Constraint.of(p + shift, a, b) for p, a, b in zip(points, alphas, betas)], seed=2
        )

        assert moved_s == pytest.approx(s, rel=1e-9, abs=1e-9)
        assert moved_z == pytest.approx(z + shift, abs=1e-6)


def test_the_optimum_does_not_depend_on_the_seed() -> None:
    rng = np.random.default_rng(3)
    H = [
        Constraint.of(p, a, b)
        for p, a, b in zip(rng.normal(size=(20, 2)), rng.uniform(0.1, 1, 20), rng.uniform(0, 1, 20))
    ]

    values = [solve_M(H, seed=seed).value for seed in range(6)]

    assert values == pytest.approx([values[0]] * 6, rel=1e-9)


def test_solve_M_is_deterministic_for_a_seed() -> None:
    H = plain(np.random.default_rng(8).normal(size=(15, 3)))

    first = solve_M(H, seed=4)
    second = solve_M(H, seed=4)

    assert first.basis.labels == second.basis.labels
    assert np.array_equal(first.center, second.center)


def test_invalid_constraints_and_inputs_are_rejected() -> None:
    with pytest.raises(ValueError, match="alpha must be positive"):
        Constraint.of([0.0], alpha=0.0)
    with pytest.raises(ValueError, match="beta must be non-negative"):
        Constraint.of([0.0], beta=-1.0)
    with pytest.raises(ValueError, match="must be finite"):
        Constraint.of([float("inf")])
    with pytest.raises(ValueError, match="at least one constraint"):
        solve_M([])
    with pytest.raises(ValueError, match="dimensions differ"):
        solve_M([Constraint.of([0.0]), Constraint.of([0.0, 1.0])])


def test_candidate_centers_need_distinct_affinely_independent_points() -> None:
    with pytest.raises(ValueError, match="distinct points"):
        center_candidates([Constraint.of([1.0, 1.0]), Constraint.of([1.0, 1.0], beta=2.0)])

    collinear = plain([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    assert center_of_basis(collinear) is None
    assert center_candidates(plain([[0.0], [1.0], [2.0]])) == []


def test_center_outside_the_hull_is_not_admissible() -> None:
    # The equidistant point of an obtuse triangle lies outside it.
    assert center_of_basis(plain([[0.0, 0.0], [4.0, 0.0], [2.0, 1.0]])) is None
    z, s = center_of_basis(plain([[0.0, 0.0], [4.0, 0.0]]))
    assert z.tolist() == pytest.approx([2.0, 0.0])
    assert s == pytest.approx(4.0)


def test_violation_test_ignores_members_and_flags_unreached_constraints() -> None:
    member = Constraint.of([0.0])
    basis = Basis(constraints=(member,), center=np.array([0.0]), value=0.0)

    assert not violation_test(member, basis)
    assert violation_test(Constraint.of([1.0]), basis)
    assert not violation_test(Constraint.of([1.0], beta=1.0), basis)


def test_basis_computation_raises_when_no_subset_qualifies(mocker) -> None:
    mocker.patch("sparsemc.lp.msw.center_candidates", return_value=[])
    member = Constraint.of([0.0], label=4)
    basis = Basis(constraints=(member,), center=np.array([0.0]), value=0.0)

    with pytest.raises(NumericalFailure, match="no subset") as caught:
        basis_computation(Constraint.of([1.0], label=7), basis)
    assert caught.value.labels == (4, 7)
