from __future__ import annotations

from collections.abc import Callable, Sequence
from pathlib import Path

import pytest

from sparsemc.geometry import PointSet
from sparsemc.greedy import PersistentNet, covering_sequences, gonzalez
from sparsemc.sparseballs import SparseBallSystem


LINE_COORDINATES = [[0.0], [1.0], [3.0], [7.0]]
LINE_EPSILON = 1.0


@pytest.fixture
def line_points() -> PointSet:
    return PointSet.from_coordinates(LINE_COORDINATES)


@pytest.fixture
def line_net(line_points: PointSet) -> PersistentNet:
    return covering_sequences(gonzalez(line_points), LINE_EPSILON)


@pytest.fixture
def line_system(line_net: PersistentNet) -> SparseBallSystem:
    return SparseBallSystem.from_net(line_net, LINE_EPSILON)


@pytest.fixture
def write_rows(tmp_path: Path) -> Callable[..., Path]:
    def write(rows: Sequence[Sequence[float]] | str, name: str = "points.csv") -> Path:
        path = tmp_path / name
        if isinstance(rows, str):
            path.write_text(rows, encoding="utf-8")
        else:
            path.write_text(
                "".join(",".join(repr(float(v)) for v in row) + "\n" for row in rows),
                encoding="utf-8",
            )
        return path

    return write
