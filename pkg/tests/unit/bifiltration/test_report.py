from __future__ import annotations

import pytest

from sparsemc.bifiltration import build_chains, build_elements, packing_bound, size_report
from sparsemc.bifiltration.report import SizeReport


def test_line_size_report(line_points, line_net, line_system) -> None:
    elements = build_elements(line_net, line_system, line_points)
    chains = build_chains(elements, max_dim=1)

    report = size_report(elements, chains, n=4, max_friends=3, timings={"elements": 0.25})

    assert report.element_count == 15
    assert dict(report.chains_per_dim) == {0: 15, 1: 50}
    assert report.chain_count == 65
    assert report.chains_per_point == pytest.approx(65 / 4)
    assert report.max_grades == 4
    assert report.as_dict()["chains_per_dim"] == {"0": 15, "1": 50}


def test_table_lists_counts_and_stage_timings() -> None:
    report = SizeReport(
        n=10,
        element_count=30,
        chains_per_dim={0: 30, 1: 40},
        max_grades=3,
        mean_grades=1.5,
        max_friends=6,
        timings={"greedy": 0.01, "chains": 1.5},
    )

    table = report.format_table()

    assert "elements" in table and "30" in table
    assert "  dim 1" in table
    assert table.splitlines()[-1].startswith("time chains [s]")
    assert table.splitlines()[-1].endswith("1.500")


def test_empty_reports_have_zero_means() -> None:
    report = size_report([], [], n=0)

    assert report.mean_grades == 0.0
    assert report.max_grades == 0
    assert report.chain_count == 0


def test_packing_bound_grows_with_dimension_and_shrinks_with_epsilon() -> None:
    assert packing_bound(1.0, 1) == pytest.approx(1.0 + 4.0 * 4.0 * 2.0)
    assert packing_bound(0.5, 2) > packing_bound(1.0, 2)
    assert packing_bound(0.5, 3) > packing_bound(0.5, 2)
